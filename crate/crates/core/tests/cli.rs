use std::process::{Command, Output};

fn mpqw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpqw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a CSV produced by the tool, split into fields.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn graph<'a>(case: &'a str, m: &'a str, n_set: &'a str, n: &'a str) -> Vec<&'a str> {
    vec!["--case", case, "--M", m, "--N", n_set, "--n", n]
}

#[test]
fn simulate_reaches_optimum_for_ten_marked() {
    let mut args = vec!["simulate"];
    args.extend(graph("1", "1000", "10000", "10"));
    args.extend(["--steps", "50"]);
    let o = mpqw(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("# mpqw-csv v1\n"));
    let header = text.lines().nth(2).unwrap();
    assert_eq!(
        header,
        "step,p_success,re_a1,im_a1,re_a2,im_a2,re_a3,im_a3,re_a4,im_a4"
    );
    let r = rows(&text);
    assert_eq!(r.len(), 51);
    for (k, row) in r.iter().enumerate() {
        assert_eq!(row[0], k.to_string());
        let p: f64 = row[1].parse().unwrap();
        assert!((0.0..=1.0).contains(&p));
    }
    assert!(r[50][1].parse::<f64>().unwrap() >= 0.99);
}

#[test]
fn simulate_full_engine_step_zero() {
    let mut args = vec!["simulate"];
    args.extend(graph("2", "3", "4", "1"));
    args.extend(["--steps", "0", "--engine", "full"]);
    let o = mpqw(&args);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 1);
    // 16 of the 96 arcs touch the marked vertex
    assert!((r[0][1].parse::<f64>().unwrap() - 16.0 / 96.0).abs() < 1e-11);
}

#[test]
fn engines_agree_on_small_graphs() {
    for case in ["1", "2"] {
        let run = |engine: &str| {
            let mut args = vec!["simulate"];
            args.extend(graph(case, "4", "3", "1"));
            args.extend([
                "--steps", "30", "--alpha", "1.3", "--beta", "0.7", "--engine", engine,
            ]);
            let o = mpqw(&args);
            assert!(o.status.success());
            rows(&stdout(&o))
        };
        let (a, b) = (run("subspace"), run("full"));
        assert_eq!(a.len(), b.len());
        for (ra, rb) in a.iter().zip(&b) {
            for (x, y) in ra.iter().zip(rb).skip(1) {
                let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
                assert!((x - y).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn auto_steps_without_marks_is_a_domain_error() {
    let mut args = vec!["simulate"];
    args.extend(graph("1", "3", "4", "0"));
    args.extend(["--steps", "auto"]);
    let o = mpqw(&args);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("no marked vertices"));
}

#[test]
fn usage_errors() {
    assert_eq!(mpqw(&["simulate", "--case", "1"]).status.code(), Some(2));
    assert_eq!(mpqw(&["bogus"]).status.code(), Some(2));
    let mut args = vec!["simulate"];
    args.extend(graph("1", "3", "4", "1"));
    args.extend(["--steps", "2", "--engine", "full", "--initial", "paper"]);
    assert_eq!(mpqw(&args).status.code(), Some(2));
}

#[test]
fn full_engine_refuses_large_graphs() {
    let mut args = vec!["simulate"];
    args.extend(graph("1", "1000", "10000", "1"));
    args.extend(["--steps", "1", "--engine", "full"]);
    let o = mpqw(&args);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn robust_case1_final_probability() {
    let mut args = vec!["robust"];
    args.extend(graph("1", "1000", "10000", "1"));
    args.extend(["--epsilon", "0.1"]);
    let o = mpqw(&args);
    assert!(o.status.success());
    let text = stdout(&o);
    let r = rows(&text);
    assert_eq!(r.len(), 187);
    assert_eq!(r.last().unwrap()[0], "372");
    let summary = text.lines().last().unwrap();
    assert!(summary.starts_with("# summary final_p="));
    assert!(summary.contains(" t=186 threshold_t=186 "));
    assert!(r.last().unwrap()[1].parse::<f64>().unwrap() >= 0.99);
}

#[test]
fn robust_case2_final_probability() {
    let mut args = vec!["robust"];
    args.extend(graph("2", "1000", "10000", "10"));
    args.extend(["--epsilon", "0.1"]);
    let o = mpqw(&args);
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert!(r.last().unwrap()[1].parse::<f64>().unwrap() >= 0.9);
}

#[test]
fn robust_with_unit_epsilon_follows_plain_walk() {
    let mut args = vec!["robust"];
    args.extend(graph("1", "5", "100", "3"));
    args.extend(["--epsilon", "1", "--t", "6"]);
    let robust = rows(&stdout(&mpqw(&args)));
    let mut args = vec!["simulate"];
    args.extend(graph("1", "5", "100", "3"));
    args.extend(["--steps", "12"]);
    let plain = rows(&stdout(&mpqw(&args)));
    assert_eq!(robust.len(), 7);
    let num = |x: &String| x.parse::<f64>().unwrap();
    for (k, r) in robust.iter().enumerate() {
        let p = &plain[2 * k];
        assert_eq!(r[0], p[0]);
        assert!(
            (num(&r[1]) - num(&p[1])).abs() < 1e-12,
            "success at step {}",
            r[0]
        );
        // the last query of the schedule carries phase 0, which changes
        // amplitudes on marked arcs but not their weight
        if k + 1 < robust.len() {
            for (x, y) in r.iter().zip(p).skip(2) {
                assert!((num(x) - num(y)).abs() < 1e-12, "step {}", r[0]);
            }
        }
    }
}

#[test]
fn robust_rejects_bad_epsilon() {
    for eps in ["0", "1.5", "-0.1"] {
        let mut args = vec!["robust"];
        args.extend(graph("1", "3", "4", "1"));
        args.extend(["--epsilon", eps]);
        assert_ne!(mpqw(&args).status.code(), Some(0), "epsilon {eps}");
    }
}

#[test]
fn schedule_output_round_trips() {
    let o = mpqw(&["schedule", "--epsilon", "0.1", "--t", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("gamma = 0.96718"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.txt");
    std::fs::write(&path, &text).unwrap();
    let again = mpqw(&["schedule", "--from", path.to_str().unwrap()]);
    assert_eq!(stdout(&again), text);

    let unit = stdout(&mpqw(&["schedule", "--epsilon", "1", "--t", "3"]));
    let alphas = unit.lines().find(|l| l.starts_with("alphas")).unwrap();
    for a in alphas.split('=').nth(1).unwrap().split(',') {
        assert!((a.trim().parse::<f64>().unwrap() - std::f64::consts::PI).abs() < 1e-12);
    }

    let bound = stdout(&mpqw(&[
        "schedule",
        "--epsilon",
        "0.1",
        "--bound-for",
        "case1",
        "--N",
        "10000",
    ]));
    assert!(bound.contains("\nt = 186\n"));
    assert_eq!(
        mpqw(&["schedule", "--epsilon", "0.1"]).status.code(),
        Some(2)
    );
}

#[test]
fn spectrum_reports() {
    let mut args = vec!["spectrum"];
    args.extend(graph("1", "5", "10000", "1"));
    let text = stdout(&mpqw(&args));
    assert!(text.contains("omega=2.00003333483e-2"));
    assert!(text.contains("t_even=158"));
    assert!(text.contains("classical_queries="));

    let mut args = vec!["spectrum"];
    args.extend(graph("2", "1000", "10000", "10"));
    assert!(stdout(&mpqw(&args)).contains("t_opt=1111"));

    let mut args = vec!["spectrum"];
    args.extend(graph("1", "3", "8", "4"));
    let text = stdout(&mpqw(&args));
    assert!(text.contains("omega=1.57079632679e0") && text.contains("t_even=2"));

    let mut args = vec!["spectrum"];
    args.extend(graph("1", "3", "8", "0"));
    assert_eq!(mpqw(&args).status.code(), Some(3));
}

#[test]
fn circuit_emits_and_verifies() {
    let mut args = vec!["circuit"];
    args.extend(graph("1", "3", "2", "1"));
    args.push("--verify");
    let o = mpqw(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("# mpqw-circuit v1\n"));
    let err = stderr(&o);
    let dev: f64 = err
        .lines()
        .find_map(|l| l.strip_prefix("max_deviation="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(dev < 1e-12);

    // the printed tally agrees with the emitted gate lines
    let emitted = stdout(&o);
    let gates: Vec<&str> = emitted
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    let total: usize = err
        .lines()
        .find(|l| l.starts_with("total"))
        .unwrap()
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(total, gates.len());
    let h_count: usize = err
        .lines()
        .find(|l| l.starts_with("H "))
        .unwrap()
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(h_count, gates.iter().filter(|g| **g == "H").count());

    let mut args = vec!["circuit"];
    args.extend(graph("1", "4", "2", "1"));
    assert_eq!(mpqw(&args).status.code(), Some(3));
}

#[test]
fn circuit_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("step.txt");
    let mut args = vec!["circuit"];
    args.extend(graph("2", "5", "4", "2"));
    args.extend([
        "--alpha",
        "-0.5",
        "--beta",
        "1.25",
        "--out",
        path.to_str().unwrap(),
    ]);
    let o = mpqw(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let parsed = mpqw::circuit::parse(&text).unwrap();
    assert_eq!(mpqw::circuit::emit(&parsed), text);
}

#[test]
fn sweep_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("sweep.svg");
    let mut args = vec!["sweep"];
    args.extend(graph("1", "1000", "10000", "10"));
    args.extend([
        "--epsilon",
        "0.1",
        "--t-min",
        "150",
        "--t-max",
        "190",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    let o = mpqw(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().nth(2).unwrap() == "t,steps,at_or_above_threshold,p_final");
    let r = rows(&text);
    assert_eq!(r.len(), 21);
    let ts: Vec<usize> = r.iter().map(|row| row[0].parse().unwrap()).collect();
    assert!(ts.windows(2).all(|w| w[1] == w[0] + 2));
    for row in &r {
        let t: usize = row[0].parse().unwrap();
        assert_eq!(row[1], (2 * t).to_string());
        assert_eq!(row[2], if t >= 186 { "1" } else { "0" });
    }

    let doc_text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&doc_text).expect("well-formed SVG");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    let polylines = doc
        .descendants()
        .filter(|n| n.has_tag_name("polyline"))
        .count();
    assert_eq!(polylines, 1);
    let points = doc
        .descendants()
        .find(|n| n.has_tag_name("polyline"))
        .unwrap()
        .attribute("points")
        .unwrap();
    assert_eq!(points.split_whitespace().count(), 21);
}

#[test]
fn sweep_below_threshold_flags_rows() {
    let mut args = vec!["sweep"];
    args.extend(graph("2", "100", "64", "1"));
    args.extend(["--epsilon", "0.1", "--t-min", "5", "--t-max", "9"]);
    let r = rows(&stdout(&mpqw(&args)));
    assert_eq!(r.len(), 5);
    assert!(r.iter().all(|row| row[2] == "0"));
    assert!(r.iter().any(|row| row[3].parse::<f64>().unwrap() < 0.9));

    let mut args = vec!["sweep"];
    args.extend(graph("2", "100", "64", "1"));
    args.extend(["--epsilon", "0.1", "--t-min", "9", "--t-max", "5"]);
    assert_eq!(mpqw(&args).status.code(), Some(2));
}
