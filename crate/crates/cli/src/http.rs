//! HTTP transport: `POST /api/<op>` with the arguments as a JSON body.
//! Responses are always `200 OK` with the protocol envelope, except for
//! unknown routes.

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::routing::post;
use axum::{Json, Router};
use serde_json::Value;

use crate::protocol::{ProtocolError, Request, Response};
use crate::service::Service;

async fn api(
    State(service): State<Service>,
    Path(op): Path<String>,
    body: Bytes,
) -> Json<Response> {
    let args = if body.iter().all(u8::is_ascii_whitespace) {
        Ok(Value::Null)
    } else {
        serde_json::from_slice(&body)
            .map_err(|e| ProtocolError::bad_request(format!("invalid JSON body: {e}")))
    };
    let request = match args.and_then(|a| Request::from_parts(&op, a)) {
        Ok(r) => r,
        Err(e) => return Json(Response::err(e)),
    };
    // kernel work and solver rechecks are blocking
    let response = tokio::task::spawn_blocking(move || service.handle(request))
        .await
        .unwrap_or_else(|_| Response::err(ProtocolError::bad_request("request handler failed")));
    Json(response)
}

pub fn router(service: Service) -> Router {
    Router::new()
        .route("/api/:op", post(api))
        .with_state(service)
}

/// Serves on `127.0.0.1:port` until the process is interrupted.
pub async fn serve(service: Service, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(service))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
