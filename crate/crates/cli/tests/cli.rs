use std::process::{Command, Output};

use serde_json::Value;

const SUBCOMMANDS: [&str; 10] = [
    "milnor",
    "groebner",
    "inertia",
    "weyl-apply",
    "orbits",
    "collatz",
    "collatz-bijection",
    "curve-count",
    "curve-sweep",
    "theorem1-probe",
];

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_diffcycles"));
    c.env_remove("DIFFCYCLES_STATE_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn payload(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("json on stdout");
    v["payload"].clone()
}

#[test]
fn milnor_split() {
    let p = payload(&run(&["milnor", "--f", "y^3+x^2+x^3", "--p", "2"]));
    assert_eq!(p["tame"], 2);
    assert_eq!(p["wild"], 2);
    assert_eq!(p["total"], 4);
}

#[test]
fn envelope_fields() {
    let out = run(&["collatz-bijection", "--k", "3", "--seed", "7"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cmd"], "collatz-bijection");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["seed"], 7);
    assert!(v["timestamp"].is_u64());
    assert_eq!(v["payload"]["bijective"], true);
}

#[test]
fn malformed_polynomial_exits_2_with_position() {
    let out = run(&["milnor", "--f", "y^3+", "--p", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("position 4"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["milnor", "--p", "2"],
        vec!["milnor", "--f", "x", "--p", "4"],
        vec!["no-such-command"],
        vec!["collatz", "--start", "-3"],
        vec!["collatz-bijection", "--k", "17"],
        vec!["groebner", "--gens", "x", "--order", "bogus"],
        vec!["groebner", "--gens", "x", "--order", "local-degree-anti"],
        vec!["curve-count", "--p", "5", "--a", "0", "--b", "1"],
        vec!["orbits", "--p", "5", "--system", "x", "--state-budget", "0"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = run(&["milnor", "--p", "2"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--f") && err.contains("Usage"), "{err}");
}

#[test]
fn computation_errors_exit_1() {
    for args in [
        vec!["theorem1-probe", "--f", "x^2+y^2", "--p", "2"],
        vec!["orbits", "--p", "101", "--system", "x;y;z", "--state-budget", "1000"],
        vec!["inertia", "--p", "2", "--module", "x^4", "--op", "d1+1"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn state_budget_from_environment() {
    let out = bin()
        .args(["orbits", "--p", "11", "--system", "x;y"])
        .env("DIFFCYCLES_STATE_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin()
        .args(["orbits", "--p", "11", "--system", "x;y", "--state-budget", "121"])
        .env("DIFFCYCLES_STATE_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(payload(&out)["periodic_count"], 121);
}

#[test]
fn every_subcommand_has_help() {
    for cmd in SUBCOMMANDS {
        let out = run(&[cmd, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        let text = String::from_utf8_lossy(&out.stdout);
        assert!(text.contains("Usage: diffcycles"), "{cmd}: {text}");
        assert!(text.contains("--output"), "{cmd}");
    }
    let out = run(&["--help"]);
    let text = String::from_utf8_lossy(&out.stdout);
    for cmd in SUBCOMMANDS {
        assert!(text.contains(cmd), "{cmd} missing from top-level help");
    }
}

#[test]
fn documented_examples() {
    let p = payload(&run(&["curve-count", "--p", "5", "--a", "1", "--b", "1"]));
    assert_eq!(p["identity_holds"], true);
    assert_eq!(p["naive_count"], 4);

    let p = payload(&run(&["orbits", "--p", "5", "--system", "y^2+x^3+x; y-3", "--h", "1"]));
    assert_eq!(p["periodic_count"], 10);
    assert_eq!(p["states"], 25);
    assert_eq!(p["h"], 1);

    let p = payload(&run(&["collatz", "--start", "27", "--variant", "paper", "--budget", "10000"]));
    assert_eq!(p["cycle"], serde_json::json!(["1", "4", "2"]));
    assert_eq!(p["budget_exhausted"], false);

    let p = payload(&run(&["collatz-bijection", "--k", "14"]));
    assert_eq!(p["bijective"], true);

    let p = payload(&run(&["groebner", "--gens", "x^2-y;y^2", "--order", "grevlex"]));
    assert_eq!(p["dimension"], 4);

    let p = payload(&run(&[
        "inertia", "--p", "2", "--module", "x^4", "--op", "d1", "--level", "2", "--element", "1+x+x^2+x^3",
    ]));
    assert_eq!(p["per_k"][0]["kernel_dimension"], 2);
    assert_eq!(p["member"], false);

    let p = payload(&run(&["weyl-apply", "--op", "x^2*d1^2 + d2", "--f", "x^3*y", "--p", "5"]));
    assert_eq!(p["result"], "x^3*y + x^3");
}

#[test]
fn theorem1_probe_goldens() {
    let p = payload(&run(&["theorem1-probe", "--f", "x^2+y^2", "--p", "5"]));
    assert_eq!(p["status"], "EXPLORATORY");
    assert_eq!(p["r_of_f"], "x^4 + 2*x^2*y^2 + y^4");
    assert_eq!(p["milnor_r_of_f_q"]["dimension"], "infinite");
    assert_eq!(p["milnor_r_of_f_fp"]["dimension"], "infinite");
    assert_eq!(p["milnor_f_q"]["dimension"], 1);
    assert_eq!(p["periodic_count"], 25);
    assert_eq!(p["critical_locus"], serde_json::json!([[0, 0]]));

    let p = payload(&run(&["theorem1-probe", "--f", "0", "--p", "5"]));
    assert_eq!(p["degenerate"], true);
    assert_eq!(p["milnor_r_of_f_q"]["dimension"], "infinite");
}

#[test]
fn config_file_supplies_defaults() {
    let path = std::env::temp_dir().join(format!("diffcycles-cli-{}.conf", std::process::id()));
    std::fs::write(&path, "# curve\np = 7\na = 1\nb = 3\n").unwrap();
    let path_s = path.to_str().unwrap();
    let p = payload(&run(&["curve-count", "--config", path_s]));
    assert_eq!(p["curve"]["p"], 7);
    assert_eq!(p["curve"]["b"], 3);
    let p = payload(&run(&["curve-count", "--b", "1", "--config", path_s]));
    assert_eq!(p["curve"]["b"], 1);
    std::fs::remove_file(&path).unwrap();

    let out = run(&["curve-count", "--config", "/nonexistent/diffcycles.conf"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_outputs() {
    let out = run(&["curve-sweep", "--pmax", "7", "--samples", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let lines: Vec<Value> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    // 4 primes * 2 samples, then the summary
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[8]["payload"]["cases"], 8);
    assert_eq!(lines[8]["payload"]["identity_failures"], 0);

    let path = std::env::temp_dir().join(format!("diffcycles-sweep-{}.jsonl", std::process::id()));
    let out = run(&["curve-sweep", "--pmax", "7", "--samples", "2", "--output", "text", "--jsonl", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("identity_failures"));
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 8);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn payloads_are_deterministic() {
    for args in [
        vec!["curve-sweep", "--pmax", "31", "--samples", "5", "--seed", "3"],
        vec!["orbits", "--p", "7", "--system", "x^2+y; x*y-1"],
        vec!["groebner", "--gens", "x^3-y*z; y^2-x; z^2-x*y", "--p", "3"],
    ] {
        let strip = |o: Output| -> Vec<Value> {
            String::from_utf8_lossy(&o.stdout)
                .split('\n')
                .filter(|l| !l.trim().is_empty())
                .map(|l| serde_json::from_str::<Value>(l).map(|v| v["payload"].clone()))
                .collect::<Result<_, _>>()
                .unwrap_or_else(|_| vec![serde_json::from_slice::<Value>(&o.stdout).unwrap()["payload"].clone()])
        };
        let a = strip(run(&args));
        let b = strip(run(&args));
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
