use std::path::Path;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use semlink::context::compose_contexts;
use semlink::{LogicalPath, PathSpace};
use semlink_server::{router, AppState};
use tower::ServiceExt;

fn fixture_store() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/store");
    copy_dir(&src, dir.path());
    dir
}

fn copy_dir(src: &Path, dest: &Path) {
    std::fs::create_dir_all(dest).unwrap();
    for entry in std::fs::read_dir(src).unwrap() {
        let entry = entry.unwrap();
        let to = dest.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &to);
        } else {
            std::fs::copy(entry.path(), to).unwrap();
        }
    }
}

fn state(dir: &tempfile::TempDir) -> Arc<AppState> {
    Arc::new(AppState::load(PathSpace::open(dir.path()).unwrap()).unwrap())
}

async fn call(state: &Arc<AppState>, method: &str, uri: &str) -> (StatusCode, Option<String>, String) {
    let req = Request::builder().method(method).uri(uri).body(Body::empty()).unwrap();
    let resp = router(state.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let ctype = resp.headers().get("content-type").map(|v| v.to_str().unwrap().to_owned());
    let body = resp.into_body().collect().await.unwrap().to_bytes();
    (status, ctype, String::from_utf8(body.to_vec()).unwrap())
}

async fn json(state: &Arc<AppState>, uri: &str) -> serde_json::Value {
    let (status, _, body) = call(state, "GET", uri).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    serde_json::from_str(&body).unwrap()
}

fn data_links(body: &str) -> usize {
    body.matches(" data-link=").count()
}

#[tokio::test]
async fn lists_documents_and_contexts() {
    let dir = fixture_store();
    let st = state(&dir);
    let docs = json(&st, "/api/documents").await;
    assert_eq!(
        docs,
        serde_json::json!(["misc/gardening", "vet/glossary", "vet/hamster-diseases", "vet/hay-fever-handbook"])
    );
    let ctxs = json(&st, "/api/contexts").await;
    let background = ctxs.as_array().unwrap().iter().find(|c| c["path"] == "contexts/background").unwrap();
    assert_eq!(background["creator"], "Mr. X");
    assert_eq!(background["title"], "Background Information");
    assert!(background["description"].as_str().unwrap().starts_with("Some continuative"));
}

#[tokio::test]
async fn background_context_wraps_one_anchor() {
    let dir = fixture_store();
    let st = state(&dir);
    let (status, ctype, body) =
        call(&st, "GET", "/api/documents/vet/hamster-diseases.xml?context=contexts/background").await;
    assert_eq!(status, StatusCode::OK);
    assert!(ctype.unwrap().starts_with("application/xhtml+xml"));
    assert_eq!(data_links(&body), 1);
    assert!(body.contains("href=\"hay-fever-handbook.xml\""));
}

#[tokio::test]
async fn no_context_returns_stored_document() {
    let dir = fixture_store();
    let st = state(&dir);
    let (status, _, body) = call(&st, "GET", "/api/documents/vet/hamster-diseases").await;
    assert_eq!(status, StatusCode::OK);
    let stored = std::fs::read_to_string(dir.path().join("vet/hamster-diseases.xml")).unwrap();
    assert_eq!(body, stored);
}

#[tokio::test]
async fn overlapping_contexts_match_library_composition() {
    let dir = fixture_store();
    let st = state(&dir);
    let (_, _, body) = call(
        &st,
        "GET",
        "/api/documents/vet/hamster-diseases?context=contexts/everything&context=contexts/background",
    )
    .await;
    let snap = st.snapshot();
    let ctxs: Vec<_> = ["contexts/everything", "contexts/background"]
        .iter()
        .map(|p| snap.context(&LogicalPath::parse(p).unwrap()).unwrap().clone())
        .collect();
    let composed = compose_contexts(&ctxs, &snap.link_graph).unwrap();
    let doc = &snap.documents[&LogicalPath::parse("vet/hamster-diseases").unwrap()].iri;
    let on_doc = composed.iter().filter(|s| snap.linkbase.anchor(s.source()).is_some_and(|a| &a.resource == doc)).count();
    assert_eq!(on_doc, 2);
    assert_eq!(data_links(&body), on_doc);

    let links = json(&st, "/api/links/vet/hamster-diseases?context=contexts/everything&context=contexts/background").await;
    assert_eq!(links.as_array().unwrap().len(), on_doc);
}

#[tokio::test]
async fn link_records_describe_selection() {
    let dir = fixture_store();
    let st = state(&dir);
    let links = json(&st, "/api/links/ignored?document=vet/hamster-diseases.xml&context=contexts/background.ctx.xml").await;
    assert_eq!(
        links,
        serde_json::json!([{
            "link": "http://example.org/vet/#Link1",
            "inner": {
                "subject": "http://example.org/vet/#HayFeverHandbook",
                "predicate": "http://www.rz.fhtw-berlin.de/MIR#BackgroundInfo",
                "object": "http://example.org/vet/#HamstersHayFever"
            },
            "source": "http://example.org/vet/#HamstersHayFever",
            "target": "http://example.org/vet/#HayFeverHandbook",
            "arcrole": "http://www.rz.fhtw-berlin.de/MIR#BackgroundInfo",
            "title": "For freshman"
        }])
    );
}

#[tokio::test]
async fn unknown_paths_are_404() {
    let dir = fixture_store();
    let st = state(&dir);
    assert_eq!(call(&st, "GET", "/api/documents/nope").await.0, StatusCode::NOT_FOUND);
    assert_eq!(call(&st, "GET", "/api/documents/vet/glossary?context=nope").await.0, StatusCode::NOT_FOUND);
    assert_eq!(call(&st, "GET", "/api/links/nope").await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn malformed_input_is_never_500() {
    let dir = fixture_store();
    std::fs::write(
        dir.path().join("contexts/broken.ctx.xml"),
        include_str!("../../core/fixtures/store/contexts/background.ctx.xml").replace("WHERE", "WHER"),
    )
    .unwrap();
    let st = state(&dir);
    let (status, _, body) = call(&st, "GET", "/api/documents/vet/glossary?context=contexts/broken").await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body.contains("error"));
    for uri in ["/api/documents/../etc/passwd", "/api/documents/a/./b", "/api/documents/x?context=%2e%2e/y", "/api/links/x?document=.."] {
        let status = call(&st, "GET", uri).await.0;
        assert!(status.is_client_error(), "{uri} gave {status}");
    }
}

#[tokio::test]
async fn reload_picks_up_new_entries() {
    let dir = fixture_store();
    let st = state(&dir);
    let before = st.snapshot();
    std::fs::write(dir.path().join("misc/new.xml"), "<html xmlns=\"http://www.w3.org/1999/xhtml\"/>").unwrap();
    assert_eq!(json(&st, "/api/documents").await.as_array().unwrap().len(), 4);
    let (status, _, body) = call(&st, "POST", "/api/reload").await;
    assert_eq!(status, StatusCode::OK);
    let report: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(report["documents"], 5);
    assert_eq!(report["links"], 2);
    assert_eq!(report["contexts"], 3);
    assert_eq!(json(&st, "/api/documents").await.as_array().unwrap().len(), 5);
    assert_eq!(before.documents.len(), 4);
}

#[tokio::test]
async fn cors_headers_present() {
    let dir = fixture_store();
    let st = state(&dir);
    let req = Request::builder()
        .uri("/api/documents")
        .header("origin", "http://localhost:5173")
        .body(Body::empty())
        .unwrap();
    let resp = router(st).oneshot(req).await.unwrap();
    assert!(resp.headers().contains_key("access-control-allow-origin"));
}

#[tokio::test]
async fn concurrent_reads_during_reload_see_whole_snapshots() {
    let dir = fixture_store();
    let st = state(&dir);
    let mut tasks = Vec::new();
    for i in 0..32 {
        let st = st.clone();
        tasks.push(tokio::spawn(async move {
            if i % 8 == 0 {
                call(&st, "POST", "/api/reload").await.0
            } else {
                let (status, _, body) =
                    call(&st, "GET", "/api/documents/vet/hamster-diseases?context=contexts/background").await;
                assert_eq!(data_links(&body), 1);
                status
            }
        }));
    }
    for t in tasks {
        assert_eq!(t.await.unwrap(), StatusCode::OK);
    }
}
