//! Wire-level test of the HTTP completion backend against a minimal
//! single-threaded HTTP server speaking the open completions API shape.

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::time::Duration;

use romankit::evalharness::{CompletionBackend, HttpBackend, HttpBackendConfig};

/// Accept `n` requests, answering each with `respond(body_json)`.
fn serve(n: usize, respond: impl Fn(serde_json::Value) -> String + Send + 'static) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || {
        for _ in 0..n {
            let (stream, _) = listener.accept().unwrap();
            let mut reader = BufReader::new(stream);
            let mut content_length = 0usize;
            let mut saw_auth = false;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                let line = line.trim_end();
                if line.is_empty() {
                    break;
                }
                let lower = line.to_ascii_lowercase();
                if let Some(v) = lower.strip_prefix("content-length:") {
                    content_length = v.trim().parse().unwrap();
                }
                if lower.starts_with("authorization: bearer") {
                    saw_auth = true;
                }
            }
            let mut body = vec![0u8; content_length];
            reader.read_exact(&mut body).unwrap();
            let mut request: serde_json::Value = serde_json::from_slice(&body).unwrap();
            request["__auth"] = serde_json::Value::Bool(saw_auth);
            let response = respond(request);
            let mut stream = reader.into_inner();
            write!(
                stream,
                "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{}",
                response.len(),
                response
            )
            .unwrap();
            stream.flush().unwrap();
        }
    });
    format!("http://{addr}/v1/completions")
}

fn backend(url: String) -> HttpBackend {
    HttpBackend::new(HttpBackendConfig {
        url,
        token: Some("secret-token".to_string()),
        timeout: Duration::from_secs(5),
    })
    .unwrap()
}

#[test]
fn complete_sends_greedy_request_and_reads_text() {
    let url = serve(1, |request| {
        assert_eq!(request["prompt"], "Question: x\nAnswer:");
        assert_eq!(request["max_tokens"], 32);
        assert_eq!(request["temperature"], 0.0);
        assert_eq!(request["__auth"], true);
        r#"{"choices": [{"text": " forty-two"}]}"#.to_string()
    });
    let backend = backend(url);
    let out = backend.complete("Question: x\nAnswer:", 32).unwrap();
    assert_eq!(out, " forty-two");
}

#[test]
fn logprob_echoes_and_sums_continuation_tokens() {
    // prompt is 7 bytes; tokens at offsets 0 and 3 belong to the prompt,
    // offsets 7 and 9 to the continuation
    let url = serve(1, |request| {
        assert_eq!(request["prompt"], "prompt: yes");
        assert_eq!(request["echo"], true);
        assert_eq!(request["max_tokens"], 0);
        serde_json::json!({
            "choices": [{
                "text": "prompt: yes",
                "logprobs": {
                    "token_logprobs": [null, -0.5, -1.25, -0.25],
                    "text_offset": [0, 3, 7, 9]
                }
            }]
        })
        .to_string()
    });
    let backend = backend(url);
    let lp = backend.logprob("prompt:", " yes").unwrap();
    assert!((lp - (-1.5)).abs() < 1e-12, "{lp}");
}

#[test]
fn http_errors_surface_as_backend_errors() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || {
        let (mut stream, _) = listener.accept().unwrap();
        let mut buf = [0u8; 4096];
        let _ = stream.read(&mut buf);
        let body = r#"{"error": "model overloaded"}"#;
        write!(
            stream,
            "HTTP/1.1 503 Service Unavailable\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{}",
            body.len(),
            body
        )
        .unwrap();
    });
    let backend = backend(format!("http://{addr}/v1/completions"));
    let err = backend.complete("x", 8).unwrap_err();
    assert!(err.to_string().contains("503"), "{err}");
}
