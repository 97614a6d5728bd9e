mod common;

use std::sync::{Arc, Mutex};
use std::time::Duration;

use bioqa_core::llm_client::{
    http_complete, ApiStyle, BackendError, CompletionBackend, EndpointConfig, GenerationParams, HttpBackend,
    RetryPolicy, Sleeper,
};
use common::stub::{completion_body, StubServer};
use serde_json::Value;

#[derive(Clone, Default)]
struct RecordingSleeper(Arc<Mutex<Vec<Duration>>>);

impl Sleeper for RecordingSleeper {
    fn sleep(&self, d: Duration) {
        self.0.lock().unwrap().push(d);
    }
}

fn policy(max_attempts: u32) -> RetryPolicy {
    RetryPolicy {
        max_attempts,
        base_delay: Duration::from_millis(10),
        max_delay: Duration::from_millis(35),
    }
}

fn endpoint(server: &StubServer) -> EndpointConfig {
    EndpointConfig {
        base_url: server.base_url.clone(),
        api_style: ApiStyle::Completions,
        timeout_secs: 5,
    }
}

fn client() -> reqwest::blocking::Client {
    reqwest::blocking::Client::new()
}

#[test]
fn echoes_first_choice_and_sends_default_params() {
    let server = StubServer::start(vec![(200, completion_body("OK."))]);
    let sleeper = RecordingSleeper::default();
    let got = http_complete(
        &client(),
        "Is it?",
        &GenerationParams::default(),
        &endpoint(&server),
        "secret",
        &policy(3),
        &sleeper,
    )
    .unwrap();
    assert_eq!(got.text, "OK.");
    assert_eq!(got.retries(), 0);

    let reqs = server.captured();
    assert_eq!(reqs.len(), 1);
    assert_eq!(reqs[0].path, "/v1/completions");
    assert_eq!(reqs[0].authorization.as_deref(), Some("Bearer secret"));
    let body: Value = serde_json::from_str(&reqs[0].body).unwrap();
    assert_eq!(body["temperature"].as_f64(), Some(0.0));
    assert_eq!(body["max_tokens"].as_u64(), Some(200));
    assert_eq!(body["top_p"].as_f64(), Some(1.0));
    assert_eq!(body["prompt"], "Is it?");
    assert_eq!(body.as_object().unwrap().len(), 7);
}

#[test]
fn caller_params_are_sent_unchanged() {
    let server = StubServer::start(vec![(200, completion_body("x"))]);
    let params = GenerationParams {
        model: "some-instruct-model".into(),
        temperature: 0.7,
        max_tokens: 64,
        top_p: 0.9,
        frequency_penalty: 0.25,
        presence_penalty: -0.5,
    };
    let backend = HttpBackend::new(endpoint(&server), "k", policy(1)).unwrap();
    backend.complete("P", &params).unwrap();
    let body: Value = serde_json::from_str(&server.captured()[0].body).unwrap();
    let sent: GenerationParams = serde_json::from_value(body.clone()).unwrap();
    assert_eq!(sent, params);
    assert_eq!(body["prompt"], "P");
}

#[test]
fn retries_after_rate_limit() {
    let server = StubServer::start(vec![(429, "{}".into()), (200, completion_body(" Fine. "))]);
    let sleeper = RecordingSleeper::default();
    let got = http_complete(
        &client(),
        "P",
        &GenerationParams::default(),
        &endpoint(&server),
        "k",
        &policy(4),
        &sleeper,
    )
    .unwrap();
    assert_eq!(got.text, "Fine.");
    assert_eq!(got.retries(), 1);
    assert_eq!(sleeper.0.lock().unwrap().len(), 1);
    assert_eq!(server.captured().len(), 2);
}

#[test]
fn server_errors_exhaust_the_policy() {
    let server = StubServer::start(vec![(503, "busy".into())]);
    let sleeper = RecordingSleeper::default();
    let err = http_complete(
        &client(),
        "P",
        &GenerationParams::default(),
        &endpoint(&server),
        "k",
        &policy(4),
        &sleeper,
    )
    .unwrap_err();
    match err {
        BackendError::Status { status, attempts, .. } => assert_eq!((status, attempts), (503, 4)),
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(server.captured().len(), 4);
    let delays = sleeper.0.lock().unwrap().clone();
    assert_eq!(delays.len(), 3);
    assert!(delays.windows(2).all(|w| w[0] <= w[1]));
    assert!(delays.iter().all(|d| *d <= Duration::from_millis(35)));
}

#[test]
fn client_errors_are_not_retried() {
    let server = StubServer::start(vec![(401, r#"{"error":"bad key"}"#.into())]);
    let err = http_complete(
        &client(),
        "P",
        &GenerationParams::default(),
        &endpoint(&server),
        "k",
        &policy(5),
        &RecordingSleeper::default(),
    )
    .unwrap_err();
    assert!(matches!(
        err,
        BackendError::Status {
            status: 401,
            attempts: 1,
            ..
        }
    ));
    assert_eq!(server.captured().len(), 1);
}

#[test]
fn malformed_body_is_a_protocol_error() {
    let server = StubServer::start(vec![(200, r#"{"choices": []}"#.into())]);
    let err = http_complete(
        &client(),
        "P",
        &GenerationParams::default(),
        &endpoint(&server),
        "k",
        &policy(3),
        &RecordingSleeper::default(),
    )
    .unwrap_err();
    assert!(matches!(err, BackendError::Protocol(_)));
    assert_eq!(server.captured().len(), 1);
}

#[test]
fn transport_failures_are_retried_then_reported() {
    // bind and drop to get a port with nothing listening
    let port = std::net::TcpListener::bind("127.0.0.1:0")
        .unwrap()
        .local_addr()
        .unwrap()
        .port();
    let ep = EndpointConfig {
        base_url: format!("http://127.0.0.1:{port}/v1"),
        ..EndpointConfig::default()
    };
    let sleeper = RecordingSleeper::default();
    let err = http_complete(
        &client(),
        "P",
        &GenerationParams::default(),
        &ep,
        "k",
        &policy(3),
        &sleeper,
    )
    .unwrap_err();
    assert!(matches!(err, BackendError::Transport { attempts: 3, .. }), "{err:?}");
    assert_eq!(sleeper.0.lock().unwrap().len(), 2);
}

#[test]
fn empty_prompt_rejected() {
    let server = StubServer::start(vec![(200, completion_body("x"))]);
    let err = http_complete(
        &client(),
        "",
        &GenerationParams::default(),
        &endpoint(&server),
        "k",
        &policy(1),
        &RecordingSleeper::default(),
    )
    .unwrap_err();
    assert!(matches!(err, BackendError::EmptyPrompt));
    assert!(server.captured().is_empty());
}

#[test]
fn chat_style_adapter() {
    let body = serde_json::json!({"choices": [{"message": {"role": "assistant", "content": "Chat answer."}}]});
    let server = StubServer::start(vec![(200, body.to_string())]);
    let ep = EndpointConfig {
        api_style: ApiStyle::Chat,
        ..endpoint(&server)
    };
    let backend = HttpBackend::new(ep, "k", policy(1)).unwrap();
    assert_eq!(
        backend.complete("Prompt text", &GenerationParams::default()).unwrap(),
        "Chat answer."
    );
    let req = &server.captured()[0];
    assert_eq!(req.path, "/v1/chat/completions");
    let sent: Value = serde_json::from_str(&req.body).unwrap();
    assert_eq!(sent["messages"][0]["content"], "Prompt text");
}
