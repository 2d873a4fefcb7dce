//! Offline trace replay.

use std::io::{self, BufRead, Write};

use crate::config::EngineConfig;
use crate::control::{ControlCommand, PlayerModel};
use crate::session::{Diagnostic, Session};

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayOutput {
    pub commands: Vec<ControlCommand>,
    pub player: PlayerModel,
    pub last_t_ms: Option<u64>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Runs every record of `trace` through a fresh session. Malformed lines
/// are recorded as diagnostics and skipped; only I/O errors fail.
pub fn replay<R: BufRead>(mut trace: R, config: &EngineConfig) -> io::Result<ReplayOutput> {
    let mut session = Session::new("replay", config.clone());
    let mut commands = Vec::new();
    let mut diagnostics = Vec::new();
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        if trace.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = trim_line_end(&buf);
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        match session.push_record(line) {
            Ok(applied) => commands.extend(applied.into_iter().map(|a| a.command)),
            Err(e) => diagnostics.push(Diagnostic::new(line_no, &e)),
        }
    }
    Ok(ReplayOutput {
        commands,
        player: session.player(),
        last_t_ms: session.last_t_ms(),
        diagnostics,
    })
}

pub(crate) fn trim_line_end(buf: &[u8]) -> &[u8] {
    let mut end = buf.len();
    while end > 0 && matches!(buf[end - 1], b'\n' | b'\r') {
        end -= 1;
    }
    &buf[..end]
}

/// Newline-delimited command log.
pub fn write_command_log<W: Write>(commands: &[ControlCommand], mut out: W) -> io::Result<()> {
    for c in commands {
        writeln!(out, "{}", c.to_json_line())?;
    }
    out.flush()
}

pub fn command_log_string(commands: &[ControlCommand]) -> String {
    let mut buf = Vec::new();
    write_command_log(commands, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("command log is UTF-8")
}
