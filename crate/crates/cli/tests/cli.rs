use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::PathBuf;
use std::process::{Child, Command, Output, Stdio};
use std::thread::sleep;
use std::time::{Duration, Instant};

use serde_json::Value;

fn einz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_einz"))
        .args(args)
        .output()
        .expect("einz runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn tables_match_golden_files() {
    for id in 1..=6 {
        let o = einz(&["tables", &id.to_string(), "--format", "csv", "--exact"]);
        assert!(o.status.success());
        assert_eq!(stdout(&o), golden(&format!("table{id}.csv")), "table {id}");
    }
}

#[test]
fn tables_are_byte_stable() {
    for format in ["csv", "json", "table"] {
        let a = einz(&["tables", "all", "--format", format, "--precision", "6"]);
        let b = einz(&["tables", "all", "--format", format, "--precision", "6"]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
}

#[test]
fn table_one_has_any_row() {
    let o = einz(&["tables", "1"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("any")), "{text}");
    assert!(text.contains("einz"));
}

#[test]
fn tables_json_parses() {
    let o = einz(&["tables", "all", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn unknown_table_and_bad_precision_are_input_errors() {
    assert_eq!(einz(&["tables", "9"]).status.code(), Some(2));
    assert_eq!(einz(&["tables", "1", "--precision", "0"]).status.code(), Some(2));
    assert_eq!(einz(&["tables", "1", "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn scenario_fixtures_print_recommendation() {
    for (file, action) in [
        ("situation2-stand18.json", "STAND (win "),
        ("situation2-stand17.json", "HIT (win "),
        ("situation3-v2.json", "STAND (win "),
        ("situation1.json", "HIT (win "),
    ] {
        let o = einz(&["scenario", &fixture(file)]);
        assert!(o.status.success(), "{file}: {}", stderr(&o));
        assert!(stdout(&o).starts_with(action), "{file}: {}", stdout(&o));
    }
}

#[test]
fn scenario_csv_lists_actions() {
    let o = einz(&["scenario", &fixture("change14.json"), "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("action,win,tie,lose,rank,recommended\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn malformed_json_exits_2_with_position() {
    let path = std::env::temp_dir().join(format!("einz-bad-{}.json", std::process::id()));
    std::fs::write(&path, "{\"decks\": 8,\n \"mode\": }").unwrap();
    let o = einz(&["scenario", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":2:"), "{}", stderr(&o));
}

#[test]
fn inconsistent_state_exits_3() {
    let path = std::env::temp_dir().join(format!("einz-aces-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"decks": 1, "mode": "open", "hand": [11, 11]}"#).unwrap();
    let o = einz(&["scenario", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn missing_file_exits_2() {
    assert_eq!(einz(&["scenario", "/no/such/file.json"]).status.code(), Some(2));
}

#[test]
fn standing_query_reports_player_win() {
    let o = einz(&["standing", &fixture("situation4-standing.json"), "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["player_win"].is_number());
}

#[test]
fn change14_fixed_arithmetic_is_exact() {
    let o = einz(&["change14", "--arithmetic", "fixed", "--exact", "--format", "csv"]);
    assert!(stdout(&o).contains("continue,0.623,779/1250"), "{}", stdout(&o));
}

#[test]
fn change14_rejects_other_totals() {
    assert_eq!(einz(&["change14", "--hand", "10,5"]).status.code(), Some(3));
}

#[test]
fn match_and_dealer_run() {
    let o = einz(&["match", "stand17", "stand18", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("player 1 (stand17) wins"));
    let o = einz(&["dealer", "--variant", "v1", "--exact", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["values"], rows[1]["values"], "V1 symmetry");
    assert_eq!(einz(&["dealer", "--variant", "v9"]).status.code(), Some(2));
    assert_eq!(einz(&["match", "stand17", "hit99"]).status.code(), Some(2));
}

#[test]
fn simulation_is_byte_identical() {
    let args = ["simulate", &fixture("simulate-seed42.json"), "--format", "json"];
    let a = einz(&args);
    let b = einz(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["rounds"], 100_000);
    assert_eq!(v["seed"], 42);
}

struct Server(Child);

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

fn free_port() -> u16 {
    TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port()
}

fn http(port: u16, request: &str) -> Option<(u16, String)> {
    let mut stream = TcpStream::connect(("127.0.0.1", port)).ok()?;
    stream.write_all(request.as_bytes()).ok()?;
    let mut raw = String::new();
    stream.read_to_string(&mut raw).ok()?;
    let status = raw.split_whitespace().nth(1)?.parse().ok()?;
    let body = raw.split_once("\r\n\r\n")?.1.to_string();
    Some((status, body))
}

fn start_server() -> (Server, u16) {
    let port = free_port();
    let child = Command::new(env!("CARGO_BIN_EXE_einz"))
        .args(["serve"])
        .env("EINZ_PORT", port.to_string())
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let server = Server(child);
    let start = Instant::now();
    while start.elapsed() < Duration::from_secs(20) {
        if let Some((200, _)) = http(port, "GET /health HTTP/1.1\r\nHost: x\r\nConnection: close\r\n\r\n") {
            return (server, port);
        }
        sleep(Duration::from_millis(50));
    }
    panic!("server did not come up on port {port}");
}

#[test]
fn serve_answers_health_and_matches_cli() {
    let (_server, port) = start_server();
    let body = std::fs::read_to_string(fixture("situation3-v2.json")).unwrap();
    let request = format!(
        "POST /api/v1/evaluate HTTP/1.1\r\nHost: x\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    );
    let (status, api) = http(port, &request).unwrap();
    assert_eq!(status, 200, "{api}");
    let cli = einz(&["scenario", &fixture("situation3-v2.json"), "--format", "json"]);
    let api: Value = serde_json::from_str(&api).unwrap();
    let cli: Value = serde_json::from_str(&stdout(&cli)).unwrap();
    assert_eq!(api, cli);
}

#[test]
fn serve_on_occupied_port_fails() {
    let taken = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port().to_string();
    let o = einz(&["serve", "--port", &port]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("cannot listen"), "{}", stderr(&o));
}
