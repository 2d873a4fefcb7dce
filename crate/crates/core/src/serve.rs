//! WebSocket streaming service. Each connection is one session; every
//! inbound text message carries one or more newline-separated frame
//! records, and every outbound message carries exactly one record.

use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use futures_util::{SinkExt, StreamExt};
use log::{debug, info, warn};
use tokio::net::{TcpListener, TcpStream};
use tokio_tungstenite::tungstenite::Message;

use crate::config::EngineConfig;
use crate::replay::trim_line_end;
use crate::session::{Diagnostic, Session};

/// Accepts connections forever, one task per session.
pub async fn serve(listener: TcpListener, config: Arc<EngineConfig>) -> std::io::Result<()> {
    let counter = AtomicU64::new(0);
    loop {
        let (stream, peer) = listener.accept().await?;
        let id = format!("s{}", counter.fetch_add(1, Ordering::Relaxed) + 1);
        let config = Arc::clone(&config);
        tokio::spawn(async move {
            if let Err(e) = handle_connection(stream, peer, id.clone(), config).await {
                warn!("session {id} ({peer}) ended with error: {e}");
            }
        });
    }
}

pub async fn bind(host: &str, port: u16) -> std::io::Result<TcpListener> {
    TcpListener::bind((host, port)).await
}

async fn handle_connection(
    stream: TcpStream,
    peer: SocketAddr,
    id: String,
    config: Arc<EngineConfig>,
) -> Result<(), tokio_tungstenite::tungstenite::Error> {
    let ws = tokio_tungstenite::accept_async(stream).await?;
    info!("session {id} opened from {peer}");
    let (mut tx, mut rx) = ws.split();
    let mut session = Session::new(id.clone(), (*config).clone());
    let mut record_no = 0usize;

    while let Some(msg) = rx.next().await {
        let payload = match msg? {
            Message::Text(text) => text.as_bytes().to_vec(),
            Message::Binary(bytes) => bytes.to_vec(),
            Message::Close(_) => break,
            Message::Ping(_) | Message::Pong(_) | Message::Frame(_) => continue,
        };
        for line in payload.split(|&b| b == b'\n') {
            let line = trim_line_end(line);
            if line.iter().all(u8::is_ascii_whitespace) {
                continue;
            }
            record_no += 1;
            match session.push_record(line) {
                Ok(applied) => {
                    for a in applied {
                        tx.feed(Message::text(a.command.to_json_line())).await?;
                        tx.feed(Message::text(a.snapshot.to_json_line())).await?;
                    }
                }
                Err(e) => {
                    debug!("session {id} record {record_no}: {e}");
                    let diag = Diagnostic::new(record_no, &e);
                    tx.feed(Message::text(diag.to_json_line())).await?;
                }
            }
        }
        tx.flush().await?;
    }
    info!("session {id} closed");
    Ok(())
}
