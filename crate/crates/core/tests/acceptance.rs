//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use futures_util::{SinkExt, StreamExt};
use tokio_tungstenite::tungstenite::Message;

use gesplayer::config::EngineConfig;
use gesplayer::control::ControlCommand;
use gesplayer::features::PointerConfig;
use gesplayer::fsm::{ControlKind, EventPhase};
use gesplayer::generate::{
    bundled_scenarios, generate_trace, trace_to_ndjson, NoiseSource, Scenario, ScenarioName,
    BAR_ORIGIN, BAR_TIP,
};
use gesplayer::geometry::{make_segment, project_clamped, Point2};
use gesplayer::landmark::{idx, HandObservation, LandmarkFrame};
use gesplayer::replay::{command_log_string, replay};
use gesplayer::session::Session;
use gesplayer::synth::{bar_hand, pointer_hand};

type Outcome = Result<String, String>;

fn traces_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("traces")
}

fn bundled_path(name: ScenarioName) -> PathBuf {
    traces_dir().join(format!("{name}.ndjson"))
}

fn bundled_frames(name: ScenarioName) -> Vec<LandmarkFrame> {
    let text = std::fs::read(bundled_path(name)).expect("bundled trace present");
    text.split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| gesplayer::parse_frame(l).expect("bundled trace parses"))
        .collect()
}

fn run_frames(frames: &[LandmarkFrame]) -> Vec<ControlCommand> {
    let mut s = Session::new("acceptance", EngineConfig::default());
    frames
        .iter()
        .cloned()
        .flat_map(|f| s.push_frame(f).expect("frames accepted"))
        .map(|a| a.command)
        .collect()
}

fn generated(name: ScenarioName, duration_ms: u64, sigma: f64, seed: u64) -> Vec<LandmarkFrame> {
    generate_trace(&Scenario::new(name, duration_ms, 30, sigma, seed)).expect("valid scenario")
}

/// Independent stream automaton for `(Begin Update* End)*` per kind.
/// Returns the number of violations, counting unclosed interactions.
fn grammar_violations(cmds: &[ControlCommand]) -> usize {
    let mut violations = 0;
    for kind in ControlKind::ALL {
        let mut open = false;
        for c in cmds.iter().filter(|c| c.kind == kind) {
            match (open, c.phase) {
                (false, EventPhase::Begin) => open = true,
                (true, EventPhase::Update) => {}
                (true, EventPhase::End) => open = false,
                _ => violations += 1,
            }
        }
        if open {
            violations += 1;
        }
    }
    violations
}

const FPS30: fn(u64) -> u64 = |i| i * 1000 / 30;

/// Arming frames, then `hold` frames of a static pointer, then the
/// pointer leaves (lift for seek, config change otherwise) for 10 frames.
fn static_pointer_trace(kind: ControlKind, target: Point2, hold: u64) -> Vec<LandmarkFrame> {
    let bar = || bar_hand(BAR_ORIGIN, BAR_TIP, 0.97);
    let tip_index = match kind {
        ControlKind::Volume => idx::MIDDLE_TIP,
        _ => idx::INDEX_TIP,
    };
    let mut frames = Vec::new();
    let mut i = 0;
    let mut push = |hands: Vec<HandObservation>| {
        frames.push(LandmarkFrame {
            t_ms: FPS30(i),
            hands,
        });
        i += 1;
    };
    for _ in 0..12 {
        push(vec![bar()]);
    }
    for _ in 0..hold {
        push(vec![bar(), pointer_hand(kind.pointer_config(), tip_index, target)]);
    }
    let away = match kind {
        ControlKind::Seek => pointer_hand(
            PointerConfig::SeekPointer,
            tip_index,
            target + Point2::new(0.0, -0.2),
        ),
        _ => pointer_hand(PointerConfig::OpenPalm, tip_index, target),
    };
    for _ in 0..10 {
        push(vec![bar(), away.clone()]);
    }
    frames
}

fn endpoint_semantics() -> Outcome {
    let mut worst: f64 = 0.0;
    for kind in ControlKind::ALL {
        for (target, expected) in [(BAR_ORIGIN, 0.0), (BAR_TIP, 1.0)] {
            // Through the wire format, as replay sees it.
            let text = trace_to_ndjson(&static_pointer_trace(kind, target, 20));
            let out = replay(text.as_bytes(), &EngineConfig::default()).map_err(|e| e.to_string())?;
            let last = out.commands.last().ok_or(format!("{kind:?}: no commands"))?;
            if last.phase != EventPhase::End || last.kind != kind {
                return Err(format!("{kind:?}: last command {last:?} is not an End"));
            }
            let err = (last.value - expected).abs();
            worst = worst.max(err);
            if err > 1e-9 {
                return Err(format!("{kind:?} at {expected}: final value {}", last.value));
            }
        }
    }
    let sweep = run_frames(&bundled_frames(ScenarioName::SeekSweep));
    let (first, last) = (sweep.first().unwrap(), sweep.last().unwrap());
    let sweep_err = first.value.abs().max((last.value - 1.0).abs());
    if sweep_err > 1e-9 || last.phase != EventPhase::End {
        return Err(format!("bundled seek-sweep: begin {} end {}", first.value, last.value));
    }
    Ok(format!("max |error| {:.1e}", worst.max(sweep_err)))
}

fn transform_frames(frames: &[LandmarkFrame], angle: f64, scale: f64, shift: Point2) -> Vec<LandmarkFrame> {
    let (s, c) = angle.sin_cos();
    let mut out = frames.to_vec();
    for f in &mut out {
        for h in &mut f.hands {
            for lm in h.landmarks.iter_mut() {
                let (x, y) = (lm.x - 0.5, lm.y - 0.5);
                lm.x = 0.5 + scale * (c * x - s * y) + shift.x;
                lm.y = 0.5 + scale * (s * x + c * y) + shift.y;
            }
        }
    }
    out
}

fn similarity_invariance() -> Outcome {
    let traces: Vec<(ScenarioName, Vec<LandmarkFrame>, Vec<ControlCommand>)> = ScenarioName::ALL
        .into_iter()
        .map(|n| {
            let frames = bundled_frames(n);
            let cmds = run_frames(&frames);
            (n, frames, cmds)
        })
        .collect();
    let mut rng = NoiseSource::new(2024, 0);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let angle = rng.range(0.0, std::f64::consts::TAU);
        let scale = rng.range(0.5, 1.5);
        let shift = Point2::new(rng.range(-0.2, 0.2), rng.range(-0.2, 0.2));
        for (name, frames, base) in &traces {
            let moved = run_frames(&transform_frames(frames, angle, scale, shift));
            if moved.len() != base.len() {
                return Err(format!(
                    "trial {trial} {name}: {} commands vs {}",
                    moved.len(),
                    base.len()
                ));
            }
            for (a, b) in base.iter().zip(&moved) {
                if (a.t_ms, a.kind, a.phase) != (b.t_ms, b.kind, b.phase) {
                    return Err(format!("trial {trial} {name}: {a:?} vs {b:?}"));
                }
                worst = worst.max((a.value - b.value).abs());
            }
        }
    }
    if worst > 1e-6 {
        return Err(format!("max value deviation {worst:.3e}"));
    }
    Ok(format!("600 transformed replays, max deviation {worst:.1e}"))
}

fn determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_gesplayer");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for s in bundled_scenarios() {
        let mut logs = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{}-{run}.log", s.name));
            let status = Command::new(exe)
                .args(["replay", "--trace"])
                .arg(bundled_path(s.name))
                .arg("--out")
                .arg(&out)
                .output()
                .map_err(|e| e.to_string())?;
            if !status.status.success() {
                return Err(format!("replay {} failed: {:?}", s.name, status.status));
            }
            logs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
        }
        if logs[0] != logs[1] {
            return Err(format!("replay of {} differs between runs", s.name));
        }

        let mut traces = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{}-{run}.ndjson", s.name));
            let status = Command::new(exe)
                .args(["gen", "--scenario", s.name.as_str()])
                .args(["--seed", &s.seed.to_string()])
                .args(["--fps", &s.fps.to_string()])
                .args(["--duration-ms", &s.duration_ms.to_string()])
                .args(["--noise", &s.noise_sigma.to_string()])
                .arg("--out")
                .arg(&out)
                .status()
                .map_err(|e| e.to_string())?;
            if !status.success() {
                return Err(format!("gen {} failed", s.name));
            }
            traces.push(std::fs::read(&out).map_err(|e| e.to_string())?);
        }
        if traces[0] != traces[1] {
            return Err(format!("gen {} differs between runs", s.name));
        }
        let bundled = std::fs::read(bundled_path(s.name)).map_err(|e| e.to_string())?;
        if traces[0] != bundled {
            return Err(format!("bundled {} does not match regeneration", s.name));
        }
    }
    Ok("6 bundled traces: replay x2 and gen x2 byte-identical".into())
}

fn event_grammar() -> Outcome {
    let mut total = 0;
    let mut checked = 0;
    for name in ScenarioName::ALL {
        let cmds = run_frames(&bundled_frames(name));
        total += grammar_violations(&cmds);
        checked += cmds.len();
        for seed in 0..5 {
            let cmds = run_frames(&generated(name, 4000, 0.004, seed));
            total += grammar_violations(&cmds);
            checked += cmds.len();
        }
    }
    if total > 0 {
        return Err(format!("{total} violations"));
    }
    Ok(format!("{checked} commands, 0 violations"))
}

fn no_trigger_silence() -> Outcome {
    for name in [ScenarioName::IdleNoise, ScenarioName::FalseTrigger] {
        let frames = bundled_frames(name);
        if frames.len() != 300 {
            return Err(format!("{name}: expected 300 frames, got {}", frames.len()));
        }
        let n = run_frames(&frames).len();
        if n != 0 {
            return Err(format!("{name}: {n} commands"));
        }
        for seed in 100..110 {
            let n = run_frames(&generated(name, 10_000, 0.005, seed)).len();
            if n != 0 {
                return Err(format!("{name} seed {seed}: {n} commands"));
            }
        }
    }
    Ok("bundled + 10 extra seeds each, 0 commands".into())
}

fn hysteresis_no_chatter() -> Outcome {
    let frames = bundled_frames(ScenarioName::HysteresisOscillation);
    let seg = make_segment(BAR_ORIGIN, BAR_TIP, 0.05).unwrap();
    let (begin, release) = (0.08 * seg.length(), 0.16 * seg.length());
    // Scenario sanity: one dip below the begin threshold, then the band.
    let dists: Vec<f64> = frames
        .iter()
        .filter_map(|f| f.right())
        .map(|h| {
            let p = h.landmark(idx::INDEX_TIP);
            project_clamped(Point2::new(p.x, p.y), &seg).dist
        })
        .collect();
    let first_dip = dists.iter().position(|&d| d < begin).ok_or("no dip")?;
    let oscillating = dists[first_dip..]
        .iter()
        .take_while(|&&d| d <= release)
        .skip_while(|&&d| d < begin)
        .count();
    if oscillating < 60 {
        return Err(format!("only {oscillating} frames inside the band"));
    }

    let cmds = run_frames(&frames);
    let begins = cmds.iter().filter(|c| c.phase == EventPhase::Begin).count();
    let ends = cmds.iter().filter(|c| c.phase == EventPhase::End).count();
    if begins != 1 || ends > 1 {
        return Err(format!("{begins} Begin, {ends} End"));
    }
    Ok(format!("{oscillating} in-band frames, {begins} Begin, {ends} End"))
}

fn noisy_sweep_accuracy() -> Outcome {
    let mut worst_end: f64 = 0.0;
    let mut worst_regression: f64 = 0.0;
    for seed in 1..=20 {
        let cmds = run_frames(&generated(ScenarioName::SeekSweep, 2000, 0.005, seed));
        let last = cmds.last().ok_or(format!("seed {seed}: no commands"))?;
        if last.phase != EventPhase::End {
            return Err(format!("seed {seed}: sweep did not end"));
        }
        let end_err = (last.value - 1.0).abs();
        worst_end = worst_end.max(end_err);
        if end_err > 0.02 {
            return Err(format!("seed {seed}: final value {}", last.value));
        }
        // Drawdown from the running maximum of the smoothed values.
        let mut peak = f64::NEG_INFINITY;
        for c in &cmds {
            peak = peak.max(c.value);
            worst_regression = worst_regression.max(peak - c.value);
        }
        if worst_regression > 0.01 {
            return Err(format!("seed {seed}: regression {worst_regression:.4}"));
        }
        if cmds.iter().any(|c| c.kind != ControlKind::Seek) {
            return Err(format!("seed {seed}: non-seek command"));
        }
    }
    Ok(format!(
        "20 seeds, max |end - 1| {worst_end:.2e}, max regression {worst_regression:.2e}"
    ))
}

fn config_discrimination() -> Outcome {
    let cases = [
        (ScenarioName::SeekSweep, ControlKind::Seek),
        (ScenarioName::VolumeSet, ControlKind::Volume),
        (ScenarioName::BrightnessSet, ControlKind::Brightness),
    ];
    let mut counted = 0;
    for (name, kind) in cases {
        let mut traces = vec![generated(name, 3000, 0.0, 1)];
        for t in [0.1, 0.5, 0.9] {
            let target = BAR_ORIGIN + (BAR_TIP - BAR_ORIGIN) * t + Point2::new(0.0, -0.01);
            traces.push(static_pointer_trace(kind, target, 30));
        }
        for frames in traces {
            let cmds = run_frames(&frames);
            if cmds.is_empty() {
                return Err(format!("{kind:?}: no commands"));
            }
            if let Some(bad) = cmds.iter().find(|c| c.kind != kind) {
                return Err(format!("{kind:?} trace produced {bad:?}"));
            }
            counted += cmds.len();
        }
    }
    Ok(format!("{counted} commands, 100% routed to the held configuration"))
}

fn oracle_equivalence() -> Outcome {
    const STEPS: usize = 1000;
    let mut rng = NoiseSource::new(99, 0);
    let mut worst_t: f64 = 0.0;
    for pair in 0..1000 {
        let mut pt = || Point2::new(rng.range(-0.5, 1.5), rng.range(-0.5, 1.5));
        let (o, tip, p) = (pt(), pt(), pt());
        let Ok(seg) = make_segment(o, tip, 0.05) else {
            continue;
        };
        let analytic = project_clamped(p, &seg);
        let (best_i, best_d) = (0..=STEPS)
            .map(|i| {
                let q = o + (tip - o) * (i as f64 / STEPS as f64);
                (i, (p - q).norm())
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let brute_t = best_i as f64 / STEPS as f64;
        let step = 1.0 / STEPS as f64;
        let dt = (analytic.t - brute_t).abs();
        worst_t = worst_t.max(dt);
        if dt > step + 1e-12 {
            return Err(format!("pair {pair}: t {} vs brute {}", analytic.t, brute_t));
        }
        if analytic.dist > best_d + 1e-12 || best_d - analytic.dist > seg.length() * step {
            return Err(format!("pair {pair}: dist {} vs brute {best_d}", analytic.dist));
        }
    }
    Ok(format!("1000 pairs, max |t - t_brute| {worst_t:.2e} (step {:.0e})", 1.0 / STEPS as f64))
}

async fn stream_over_socket(addr: std::net::SocketAddr, lines: &[&str]) -> Result<Vec<String>, String> {
    let (mut ws, _) = tokio_tungstenite::connect_async(format!("ws://{addr}"))
        .await
        .map_err(|e| e.to_string())?;
    for line in lines {
        ws.send(Message::text(line.to_string())).await.map_err(|e| e.to_string())?;
    }
    ws.close(None).await.map_err(|e| e.to_string())?;
    let mut received = Vec::new();
    while let Some(Ok(msg)) = ws.next().await {
        if let Message::Text(t) = msg {
            received.push(t.to_string());
        }
    }
    Ok(received)
}

fn serve_replay_equivalence() -> Outcome {
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    rt.block_on(async {
        let listener = gesplayer::serve::bind("127.0.0.1", 0).await.map_err(|e| e.to_string())?;
        let addr = listener.local_addr().map_err(|e| e.to_string())?;
        tokio::spawn(gesplayer::serve::serve(listener, Arc::new(EngineConfig::default())));
        let mut total = 0;
        for name in [
            ScenarioName::SeekSweep,
            ScenarioName::VolumeSet,
            ScenarioName::BrightnessSet,
            ScenarioName::HysteresisOscillation,
        ] {
            let text = std::fs::read_to_string(bundled_path(name)).map_err(|e| e.to_string())?;
            let expected = command_log_string(
                &replay(text.as_bytes(), &EngineConfig::default()).unwrap().commands,
            );
            let lines: Vec<&str> = text.lines().collect();
            let received = tokio::time::timeout(Duration::from_secs(20), stream_over_socket(addr, &lines))
                .await
                .map_err(|_| "timed out".to_string())??;
            let mut streamed = String::new();
            for r in &received {
                let v: serde_json::Value = serde_json::from_str(r).map_err(|e| e.to_string())?;
                if v.get("kind").is_some() {
                    streamed.push_str(r);
                    streamed.push('\n');
                }
            }
            if streamed != expected {
                return Err(format!("{name}: streamed log differs from replay"));
            }
            total += expected.lines().count();
        }
        Ok(format!("4 traces, {total} commands identical"))
    })
}

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { name: "endpoint semantics", budget: Some(Duration::from_secs(1)), run: endpoint_semantics },
        Criterion { name: "similarity invariance", budget: Some(Duration::from_secs(10)), run: similarity_invariance },
        Criterion { name: "determinism", budget: Some(Duration::from_secs(5)), run: determinism },
        Criterion { name: "event grammar", budget: None, run: event_grammar },
        Criterion { name: "no-trigger silence", budget: None, run: no_trigger_silence },
        Criterion { name: "hysteresis no-chatter", budget: None, run: hysteresis_no_chatter },
        Criterion { name: "noisy sweep accuracy", budget: Some(Duration::from_secs(10)), run: noisy_sweep_accuracy },
        Criterion { name: "config discrimination", budget: None, run: config_discrimination },
        Criterion { name: "oracle equivalence", budget: None, run: oracle_equivalence },
        Criterion { name: "serve/replay equivalence", budget: None, run: serve_replay_equivalence },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:?}, budget {b:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {:<26} {detail} ({elapsed:.2?})", c.name),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:<26} {detail} ({elapsed:.2?})", c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
