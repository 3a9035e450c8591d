use std::io::Write;

use streammatch::bench::{run, write_report, ExperimentConfig, Format, InstanceSpec, RunReport};
use streammatch::Registry;

fn one_edge_file() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "2 1 bipartite\n1\n0 1").unwrap();
    f
}

#[test]
fn greedy_on_konrad_stays_near_half() {
    let mut cfg = ExperimentConfig::new(InstanceSpec::Konrad { n: 2000 }, "greedy");
    cfg.trials = 50;
    let report = run(&cfg, &Registry::default()).unwrap();
    let mean = report.aggregates.mean_ratio.unwrap();
    assert!((0.5..=0.62).contains(&mean), "mean ratio {mean}");
}

#[test]
fn single_edge_graph_is_solved() {
    let f = one_edge_file();
    let cfg = ExperimentConfig::new(
        InstanceSpec::File {
            path: f.path().into(),
        },
        "bm-farg",
    );
    let report = run(&cfg, &Registry::default()).unwrap();
    assert_eq!(report.records[0].ratio, 1.0);
    assert!(report.records[0].flags.is_empty());
}

#[test]
fn reports_are_deterministic() {
    for algo in ["gm", "bm-barg"] {
        let spec = if algo == "gm" {
            "gnp:60,0.1"
        } else {
            "planted:40,0.1"
        };
        let mut cfg = ExperimentConfig::new(spec.parse().unwrap(), algo);
        cfg.trials = 6;
        cfg.base_seed = 99;
        cfg.diagnostics = true;
        let a = run(&cfg, &Registry::default()).unwrap().without_runtime();
        let b = run(&cfg, &Registry::default()).unwrap().without_runtime();
        let (mut ja, mut jb) = (Vec::new(), Vec::new());
        write_report(&a, Format::Json, &mut ja).unwrap();
        write_report(&b, Format::Json, &mut jb).unwrap();
        assert_eq!(ja, jb);
        assert_eq!(
            a.records.iter().map(|r| r.seed).collect::<Vec<_>>(),
            (99..105).collect::<Vec<_>>()
        );
    }
}

#[test]
fn json_round_trips_and_csv_has_one_row_per_trial() {
    let mut cfg = ExperimentConfig::new(InstanceSpec::Planted { n: 30, p: 0.1 }, "bm-farg");
    cfg.trials = 5;
    cfg.overrides.tau = Some(0.1);
    let report = run(&cfg, &Registry::default()).unwrap();

    let mut json = Vec::new();
    write_report(&report, Format::Json, &mut json).unwrap();
    let back: RunReport = serde_json::from_slice(&json).unwrap();
    assert_eq!(back.config, cfg);
    assert_eq!(back.records.len(), 5);
    assert!(!String::from_utf8(json)
        .unwrap()
        .contains("\"diagnostics\": {"));

    let mut csv = Vec::new();
    write_report(&report, Format::Csv, &mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().count(), 1 + 5);
    assert!(!text.lines().next().unwrap().contains("alpha"));
}

#[test]
fn diagnostics_identities_hold() {
    for (spec, algo) in [
        ("konrad:200", "bm-farg"),
        ("planted:80,0.05", "bm-barg"),
        ("gnp:80,0.05", "gm"),
    ] {
        let mut cfg = ExperimentConfig::new(spec.parse().unwrap(), algo);
        cfg.trials = 5;
        cfg.diagnostics = true;
        let report = run(&cfg, &Registry::default()).unwrap();
        for r in &report.records {
            let d = r.diagnostics.as_ref().unwrap();
            assert!(d.identities_hold, "{spec} {algo} seed {}", r.seed);
            assert_eq!(d.mstar1 + d.mstar2, r.mu_exact);
            assert!((0.0..=1.0).contains(&r.ratio));
            assert!(r.mu_exact >= r.matching_size);
            if algo == "gm" {
                assert_eq!(d.reduction_inequality_holds, Some(true));
            } else {
                assert!(d.r_p.is_some() && d.mstar_c.is_some());
            }
        }
        let mut csv = Vec::new();
        write_report(&report, Format::Csv, &mut csv).unwrap();
        assert!(String::from_utf8(csv)
            .unwrap()
            .lines()
            .next()
            .unwrap()
            .contains("alpha"));
    }
}

#[test]
fn trial_failures_become_flags() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "3 0 general").unwrap();
    let cfg = ExperimentConfig::new(
        InstanceSpec::File {
            path: f.path().into(),
        },
        "gm",
    );
    let report = run(&cfg, &Registry::default()).unwrap();
    assert_eq!(report.records[0].ratio, 1.0);

    let cfg = ExperimentConfig::new(
        InstanceSpec::File {
            path: "/nonexistent/graph.txt".into(),
        },
        "gm",
    );
    assert!(run(&cfg, &Registry::default()).is_err());

    // a general file fed to a bipartite-only algorithm fails per trial
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "3 3 general\n0 1\n1 2\n0 2").unwrap();
    let mut cfg = ExperimentConfig::new(
        InstanceSpec::File {
            path: f.path().into(),
        },
        "bm-barg",
    );
    cfg.trials = 2;
    let report = run(&cfg, &Registry::default()).unwrap();
    assert_eq!(report.aggregates.failed_trials, 2);
    assert!(report
        .records
        .iter()
        .all(|r| r.flags[0].starts_with("error")));
    assert_eq!(report.aggregates.mean_ratio, None);
}
