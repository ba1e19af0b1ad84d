use std::process::{Command, Output};

fn hankel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hankel"))
        .args(args)
        .env_remove("HANKEL_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn identities_report_every_entry_and_fail_on_stated_errors() {
    let o = hankel(&["identities"]);
    assert_eq!(o.status.code(), Some(1));
    let rows = json_lines(&o);
    assert!(rows.len() >= 20);
    let holds = |name: &str| rows.iter().find(|r| r["name"] == name).unwrap()["holds"].as_bool().unwrap();
    assert!(holds("starlike-h31-expansion"));
    assert!(holds("convex-h31-expansion"));
    assert!(!holds("harmonic-g-h31-substitution"));
    assert!(holds("harmonic-g-h31-substitution-amended"));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("harmonic-g-h31-substitution"));
}

#[test]
fn single_identity_and_forced_failure() {
    let o = hankel(&["identities", "--name", "starlike-h31-expansion"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["residual_term_count"], 0);

    let o = hankel(&["identities", "--name", "starlike-h31-expansion", "--perturb", "starlike-h31-expansion"]);
    assert_eq!(o.status.code(), Some(1));
    let row = &json_lines(&o)[0];
    assert_eq!(row["holds"], false);
    assert_eq!(row["residual"], "-1");

    assert_eq!(hankel(&["identities", "--name", "nope"]).status.code(), Some(2));
}

#[test]
fn identities_text_table_matches_json() {
    let text = stdout(&hankel(&["identities", "--format", "text"]));
    let json = json_lines(&hankel(&["identities"]));
    assert_eq!(text.lines().count(), json.len() + 1);
    assert!(text.starts_with("name"));
}

#[test]
fn lemmas_are_deterministic() {
    let a = hankel(&["lemmas", "--samples", "2000", "--seed", "7"]);
    let b = hankel(&["lemmas", "--samples", "2000", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let one = hankel(&["lemmas", "--samples", "1", "--format", "text"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one).lines().count(), 6);
    assert_eq!(hankel(&["lemmas", "--samples", "0"]).status.code(), Some(2));
}

#[test]
fn bounds_rows() {
    let o = hankel(&["bounds", "--class", "starlike", "--alpha", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["bound_exact"], "1");

    let o = hankel(&["bounds", "--class", "harmonic-m", "--alpha", "-0.5", "--format", "csv"]);
    let csv = stdout(&o);
    assert!(csv.starts_with("class,alpha,alpha_exact,kind,functional,bound,bound_exact,source\n"));
    assert!(csv.contains(",97/320,") && csv.contains(",1/20,"));

    let o = hankel(&["bounds", "--class", "r", "--alpha-grid", "0:0.25:0.05"]);
    let rows = json_lines(&o);
    let h31: Vec<_> = rows.iter().filter(|r| r["kind"] == "bound" && r["functional"] == "h31").collect();
    assert_eq!(h31.len(), 6);
    assert_eq!(h31[5]["bound_exact"], "93/320");

    assert_eq!(hankel(&["bounds", "--class", "s", "--alpha", "-0.5"]).status.code(), Some(2));
    assert_eq!(hankel(&["bounds", "--class", "s", "--alpha", "1"]).status.code(), Some(2));
    assert_eq!(hankel(&["bounds", "--class", "s"]).status.code(), Some(2));
}

#[test]
fn search_attains_koebe() {
    let o = hankel(&["search", "--class", "starlike", "--alpha", "0", "--functional", "j2", "--restarts", "200", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let r = &json_lines(&o)[0];
    assert!(r["best_magnitude"].as_f64().unwrap() >= 1.0 - 1e-6);
    assert_eq!(r["bound_exact"], "1");
}

#[test]
fn search_config_errors() {
    assert_eq!(hankel(&["search", "--class", "s", "--restarts", "0"]).status.code(), Some(2));
    assert_eq!(hankel(&["search", "--class", "s", "--atoms", "0"]).status.code(), Some(2));
    assert_eq!(hankel(&["search", "--class", "s", "--functional", "h31-g"]).status.code(), Some(2));
    assert_eq!(hankel(&["search", "--class", "s", "--functional", "bogus"]).status.code(), Some(2));
    assert_eq!(hankel(&["search", "--class", "x"]).status.code(), Some(2));
}

#[test]
fn search_is_deterministic_across_thread_counts() {
    let args = ["search", "--class", "k", "--alpha", "1/4", "--restarts", "16", "--seed", "3"];
    let a = hankel(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_hankel"))
        .args(args)
        .env("HANKEL_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn sweep_convex_h31() {
    let o = hankel(&["sweep", "--class", "k", "--functional", "h31", "--alpha-grid", "0:0.9:0.1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let gaps: Vec<f64> = r.records().map(|rec| rec.unwrap()[7].parse().unwrap()).collect();
    assert_eq!(gaps.len(), 10);
    assert!(gaps.iter().all(|&g| g >= -1e-9));
}

#[test]
fn sweep_reports_bound_violations() {
    // the published convex J3 bound is exceeded at α = 3/4
    let o = hankel(&["sweep", "--class", "k", "--functional", "j3", "--alpha-grid", "0.75:0.75:0.1", "--restarts", "20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("violation"));
}

#[test]
fn output_to_file() {
    let dir = std::env::temp_dir().join(format!("hankel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bounds.csv");
    let o = hankel(&["bounds", "--class", "k", "--alpha", "0", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().contains("49/540"));
    std::fs::remove_dir_all(&dir).unwrap();
}
