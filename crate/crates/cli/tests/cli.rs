use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptwave")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Rows of a CSV table as header-keyed maps.
fn rows(csv: &str) -> Vec<Vec<(String, String)>> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    lines
        .map(|l| header.iter().map(|h| h.to_string()).zip(l.split(',').map(str::to_string)).collect())
        .collect()
}

fn field(row: &[(String, String)], name: &str) -> String {
    row.iter().find(|(h, _)| h == name).unwrap().1.clone()
}

fn num(row: &[(String, String)], name: &str) -> f64 {
    field(row, name).parse().unwrap()
}

#[test]
fn eval_without_gain_gives_closed_form() {
    let out = stdout(&["eval", "--gamma", "0", "--ell", "1", "--k", "1+0i"]);
    let r = &rows(&out)[0];
    let f = (num(r, "re_f"), num(r, "im_f"));
    let want = (-4.0 * 2f64.cos(), -4.0 * 2f64.sin());
    assert!((f.0 - want.0).abs() < 1e-13 && (f.1 - want.1).abs() < 1e-13, "{out}");
}


#[test]
fn zeros_near_the_first_threshold() {
    let out = stdout(&["zeros", "--gamma", "2.071", "--ell", "0", "--window", "0,2,-0.5,0.5"]);
    let table = rows(&out);
    let near: Vec<_> = table.iter().filter(|r| (num(r, "re_k") - 1.065).abs() < 5e-3).collect();
    assert_eq!(near.len(), 1, "{out}");
    assert!(num(near[0], "im_k").abs() < 1e-3);
    // the amplitude printed by the threshold command is exact to 15 digits
    let th = stdout(&["threshold", "--range", "0,0.05", "--step", "0.05"]);
    let gamma = field(&rows(&th)[0], "gamma");
    let out = stdout(&["zeros", "--gamma", &gamma, "--ell", "0", "--window", "0,2,-0.5,0.5"]);
    let table = rows(&out);
    let near: Vec<_> = table.iter().filter(|r| (num(r, "re_k") - 1.065).abs() < 5e-3).collect();
    assert_eq!(near.len(), 1);
    assert_eq!(field(near[0], "class"), "SpectralSingularity");
    assert_eq!(num(near[0], "im_k"), 0.0);
}

#[test]
fn gap_values() {
    let out = stdout(&["gap", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["command"], "gap");
    let r = &v["rows"][0];
    let get = |k: &str| r[k].as_f64().unwrap();
    assert!((get("beta_star") - 4.808438).abs() < 1e-6);
    assert!((get("u_star") - 0.611772).abs() < 1e-6);
    assert!((get("gamma_lo") - 4.935).abs() < 1e-3);
    assert!((get("gamma_hi") - 11.561).abs() < 1e-3);
}

#[test]
fn ladder_rows_for_every_admissible_index() {
    let out = stdout(&["ladder", "--gamma", "40", "--ell", "30"]);
    let table = rows(&out);
    assert!(table.len() >= 3);
    for r in &table {
        assert_eq!(field(r, "admissible"), "true");
        assert_eq!(field(r, "count"), "1");
        assert!(num(r, "im_found") < 0.0);
    }
}

#[test]
fn design_and_scan_tables() {
    let out = stdout(&["design", "--k", "1.065", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["residual"].as_f64().unwrap() < 1e-9));
    assert!(v["summary"].is_array());
    let out = stdout(&["scan", "--kmax", "2", "--dk", "0.05", "--format", "json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 40);
    assert!(v["jumps"].is_array() && v["empty"].is_array());
}

#[test]
fn headers_are_stable() {
    let cases: [(&[&str], &str); 9] = [
        (&["eval", "--gamma", "1", "--ell", "1", "--k", "1+0.5i"], "re_k,im_k,re_f,im_f,re_df,im_df,log_scale"),
        (
            &["zeros", "--gamma", "1", "--ell", "0", "--window", "0,1,0,1"],
            "re_k,im_k,class,multiplicity,residual,newton_iters,unresolved",
        ),
        (
            &["ladder", "--gamma", "40", "--ell", "30", "--n", "1"],
            "n,admissible,re_pred,im_pred,radius,count,re_found,im_found,distance",
        ),
        (&["design", "--k", "1.065"], "k,gamma,ell,u,beta,n,residual,flagged"),
        (&["scan", "--kmax", "0.5", "--dk", "0.1"], "k,gamma_min,ell_min,ell_1,ell_2,ell_3"),
        (&["gap"], "beta_lo,beta_hi,u_star,beta_star,grid_margin,gamma_lo,gamma_hi,by_bisection"),
        (&["threshold", "--range", "0,0.1"], "ell,gamma,re_k,im_k,kind,seed_id,flags,shift,branch"),
        (&["atlas", "--gamma-max", "5", "--ell-max", "2"], "ell,gamma,re_k,im_k,kind,seed_id,flags,shift,branch"),
        (
            &["trace", "--gamma", "3", "--ell", "0", "--k", "2.782106+1.340130i", "--drive", "ell", "--range", "0,0.5"],
            "ell,gamma,re_k,im_k,kind,seed_id,flags,shift,branch",
        ),
    ];
    for (args, header) in cases {
        let out = stdout(args);
        assert_eq!(out.lines().next().unwrap(), header, "{args:?}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["atlas", "--gamma-max", "15", "--ell-max", "5"][..],
        &["trace", "--gamma", "3", "--ell", "0", "--k", "2.782106+1.340130i", "--drive", "ell", "--range", "0,10", "--format", "json"],
        &["zeros", "--gamma", "16", "--ell", "1", "--window", "-8,8,-4,2"],
    ] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("gap.csv");
    let out = run(&["gap", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&["gap"]));
}

#[test]
fn trace_reports_crossing_events() {
    let out = stdout(&[
        "trace", "--gamma", "3", "--ell", "0", "--k", "2.782106+1.340130i", "--drive", "ell", "--range", "0,10", "--format", "json",
    ]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let events = v["events"].as_array().unwrap();
    assert_eq!(events.len(), 1, "{events:?}");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["frobnicate"][..],
        &["eval", "--gamma", "1"],
        &["eval", "--gamma", "x", "--ell", "0", "--k", "1"],
        &["zeros", "--gamma", "1", "--window", "1,0,0,1"],
        &["zeros", "--gamma", "1", "--window", "0,1,0"],
        &["eval", "--gamma", "1", "--ell", "0", "--k", "1", "--format", "xml"],
        &["design", "--k", "-1"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numeric_failures_exit_with_three_and_a_module_tag() {
    for (args, module) in [
        (&["zeros", "--gamma=-1", "--ell", "0", "--window", "0,1,0,1"][..], "model"),
        (&["trace", "--gamma", "3", "--ell", "0", "--k", "1+1i", "--drive", "ell", "--range", "0,1"], "continuation"),
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        let v: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(v["module"], module, "{v}");
        assert!(v["error"].is_string() && v["message"].is_string());
    }
}
