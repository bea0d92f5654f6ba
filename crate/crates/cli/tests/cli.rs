use std::process::{Command, Output};

fn balans(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_balans"))
        .args(args)
        .env_remove("BALANS_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(args: &[&str]) -> i32 {
    balans(args).status.code().unwrap()
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["find", "--a", "1", "--b", "1", "--variant", "balancing", "--nmax", "1500"], 0),
        (&["verify", "--theorem", "thmA.1"], 0),
        (&["verify", "--theorem", "eq1.1"], 0),
        (&["verify", "--theorem", "lemma3.9"], 1),
        (&["verify", "--theorem", "conj4.1"], 1),
        (&["detect", "--terms", "1,2,4,8,16,32", "--depth", "1"], 0),
        (&["detect", "--terms", "1,2,4,7,11,30,1", "--max-depth", "2"], 1),
        (&["recip", "--family", "fibonacci", "--start", "4", "--mode", "floor"], 0),
        (&["recip", "--family", "generalized", "--params", "0,0,1,3,-3,1", "--start", "3", "--mode", "floor", "--budget", "64"], 3),
        (&["recip", "--family", "fibonacci", "--start", "2", "--mode", "nearest", "--budget", "1"], 3),
        (&["frobnicate"], 2),
        (&["find", "--a", "1"], 2),
        (&["find", "--a", "1", "--b", "1", "--variant", "sideways", "--nmax", "5"], 2),
        (&["verify", "--theorem", "thm9.9"], 2),
        (&["seq", "--family", "cobalancing", "--a", "3", "--b", "1"], 2),
        (&["detect", "--terms", "1,2", "--depth", "2"], 2),
        (&["recip", "--family", "tribonacci", "--start", "0", "--mode", "floor"], 2),
    ];
    for (args, want) in cases {
        let o = balans(args);
        assert_eq!(o.status.code(), Some(*want), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        if *want == 2 {
            assert!(!o.stderr.is_empty(), "{args:?} should explain itself");
        }
    }
}

#[test]
fn find_balancing_window() {
    let o = balans(&["find", "--a", "1", "--b", "1", "--variant", "balancing", "--nmax", "1500"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ns: Vec<&str> = v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["n"].as_str().unwrap())
        .collect();
    assert_eq!(ns, ["6", "35", "204", "1189"]);
    assert_eq!(v["solutions"][0]["r"], "2");
}

#[test]
fn detect_table_three_tuple() {
    let o = balans(&["detect", "--terms", "2,14,84,492,2870,16730", "--depth", "2", "--constant", "--format", "text"]);
    assert_eq!(stdout(&o).trim(), "(6, -1, _2)");
}

#[test]
fn json_round_trips() {
    let runs: &[&[&str]] = &[
        &["seq", "--family", "tribonacci", "--start", "-6", "--count", "12"],
        &["detect", "--terms", "6,35,204,1189,6930,40391"],
        &["find", "--a", "2", "--b", "3", "--variant", "cobalancing", "--nmax", "100000"],
        &["find", "--a", "9", "--b", "1", "--variant", "balancing", "--square", "--nmax", "100"],
        &["recip", "--family", "tribonacci", "--start", "5", "--mode", "nearest"],
        &["recip", "--a", "1", "--b", "2", "--start", "3", "--mode", "floor"],
        &["verify", "--theorem", "eq1.2", "--format", "json"],
        &["verify", "--theorem", "conj4.1", "--format", "json"],
    ];
    for args in runs {
        let text = stdout(&balans(args));
        let v: serde_json::Value = serde_json::from_str(&text).expect("valid json");
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text, "{args:?}");
        assert!(!text.contains(": 1") && !text.contains(": 0"), "numbers must be strings: {args:?}");
    }
}

#[test]
fn recip_answers() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&balans(&[
        "recip", "--family", "balancing", "--start", "2", "--mode", "floor",
    ])))
    .unwrap();
    assert_eq!(v["answer"], "28");
    let v: serde_json::Value = serde_json::from_str(&stdout(&balans(&[
        "recip", "--family", "tribonacci", "--start", "9", "--stride", "2", "--alternating", "--mode", "nearest",
    ])))
    .unwrap();
    // (-1)^n is not applied here: the first term is positive, so the sum is positive
    assert_eq!(v["answer"], "105");
    let v: serde_json::Value = serde_json::from_str(&stdout(&balans(&[
        "recip", "--family", "tribonacci", "--start", "4", "--partial-sum-denoms", "--mode", "nearest",
    ])))
    .unwrap();
    assert_eq!(v["answer"], "4");
}

#[test]
fn grid_outputs_do_not_depend_on_jobs() {
    let dir = std::env::temp_dir().join(format!("balans-grid-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut seen = Vec::new();
    for jobs in ["1", "4"] {
        let csv = dir.join(format!("g{jobs}.csv"));
        let ppm = dir.join(format!("g{jobs}.ppm"));
        let o = balans(&[
            "grid", "--variant", "balancing", "--amax", "20", "--bmax", "12", "--nmax", "300",
            "--out-csv", csv.to_str().unwrap(), "--out-ppm", ppm.to_str().unwrap(), "--jobs", jobs,
        ]);
        assert_eq!(o.status.code(), Some(0));
        seen.push((std::fs::read(&csv).unwrap(), std::fs::read(&ppm).unwrap(), o.stdout));
    }
    assert_eq!(seen[0], seen[1]);
    let csv = String::from_utf8(seen[0].0.clone()).unwrap();
    assert!(csv.starts_with("# n_max=300\na,b,count,solutions\n1,1,1,1:0\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn jobs_env_fallback() {
    let o = Command::new(env!("CARGO_BIN_EXE_balans"))
        .args(["verify", "--theorem", "thm1.8"])
        .env("BALANS_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(code(&["verify", "--theorem", "thm1.8", "--jobs", "3"]), 0);
}
