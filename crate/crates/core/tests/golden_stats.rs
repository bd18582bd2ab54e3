//! Statistics on the 20-rally golden fixture against independently tabulated values.

use serde_json::Value;
use vren_core::notation::{lint_match, parse_match};
use vren_core::stats::{
    attack_table, pass_set_quality, serve_receive_distribution, set_location_distribution, system_split,
    SystemStatus,
};
use vren_core::{Match, ServeType, Team};

const FIXTURE: &str = include_str!("fixtures/golden20.vren");
const EXPECTED: &str = include_str!("fixtures/golden20.expected.json");

fn fixture() -> Vec<Match> {
    vec![parse_match(FIXTURE).unwrap()]
}

fn expected() -> Value {
    serde_json::from_str(EXPECTED).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

fn opt_close(actual: Option<f64>, expected: &Value) -> bool {
    match (actual, expected.as_f64()) {
        (Some(a), Some(e)) => close(a, e),
        (None, None) => expected.is_null(),
        _ => false,
    }
}

#[test]
fn fixture_shape() {
    let m = &fixture()[0];
    assert_eq!(m.rallies.len(), 20);
    assert!(lint_match(m).is_empty());
}

#[test]
fn attack_tables() {
    let golden = expected();
    for team in [Team::A, Team::B] {
        let report = attack_table(&fixture(), team).unwrap();
        let g = &golden["attack_table"][team.token()];
        assert!(close(report.in_share, g["in_share"].as_f64().unwrap()));
        assert!(close(report.out_share, g["out_share"].as_f64().unwrap()));
        let rows = g["rows"].as_array().unwrap();
        assert_eq!(rows.len(), report.rows.len());
        for (row, e) in report.rows.iter().zip(rows) {
            let status = match e["status"].as_str().unwrap() {
                "in" => SystemStatus::InSystem,
                _ => SystemStatus::OutOfSystem,
            };
            let ctx = format!("team {team} {status:?} {}", row.location.label());
            assert_eq!(row.status, status, "{ctx}");
            assert_eq!(row.location.label(), e["location"].as_str().unwrap(), "{ctx}");
            assert_eq!(row.sets, e["sets"].as_u64().unwrap(), "{ctx}");
            assert_eq!(row.attempts, e["attempts"].as_u64().unwrap(), "{ctx}");
            assert!(opt_close(row.share, &e["share"]), "{ctx} share");
            assert!(opt_close(row.spike, &e["spike"]), "{ctx} spike");
            assert!(opt_close(row.junk, &e["junk"]), "{ctx} junk");
            assert!(opt_close(row.line, &e["line"]), "{ctx} line");
            assert!(opt_close(row.angle, &e["angle"]), "{ctx} angle");
            assert!(opt_close(row.seam, &e["seam"]), "{ctx} seam");
        }
    }
}

#[test]
fn system_splits() {
    let golden = expected();
    for team in [Team::A, Team::B] {
        let (i, o) = system_split(&fixture(), team).unwrap();
        let g = golden["system_split"][team.token()].as_array().unwrap();
        assert!(close(i, g[0].as_f64().unwrap()) && close(o, g[1].as_f64().unwrap()));
    }
}

#[test]
fn set_location_distributions() {
    let golden = expected();
    for (key, team) in [("all", None), ("A", Some(Team::A)), ("B", Some(Team::B))] {
        let dist = set_location_distribution(&fixture(), team).unwrap();
        let g = golden["set_location_distribution"][key].as_object().unwrap();
        assert_eq!(dist.len(), g.len(), "{key}");
        for (loc, pct) in dist {
            assert!(close(pct, g[loc.token()].as_f64().unwrap()), "{key} {loc}");
        }
    }
}

#[test]
fn serve_receive_distributions() {
    let golden = expected();
    for (key, serve) in [("all", None), ("jump", Some(ServeType::Jump)), ("float", Some(ServeType::Float))] {
        let counts = serve_receive_distribution(&fixture(), serve);
        let g = golden["serve_receive_distribution"][key].as_object().unwrap();
        assert_eq!(counts.len(), g.len(), "{key}");
        for (zone, n) in counts {
            assert_eq!(n, g[&zone.to_string()].as_u64().unwrap(), "{key} zone {zone}");
        }
    }
}

#[test]
fn pass_set_qualities() {
    let golden = expected();
    for team in [Team::A, Team::B] {
        let q = pass_set_quality(&fixture(), team).unwrap();
        let g = &golden["pass_set_quality"][team.token()];
        assert_eq!(q.in_passes, g["in_passes"].as_u64().unwrap());
        assert_eq!(q.out_passes, g["out_passes"].as_u64().unwrap());
        assert_eq!(q.in_sets, g["in_sets"].as_u64().unwrap());
        assert_eq!(q.out_sets, g["out_sets"].as_u64().unwrap());
        assert_eq!(q.high_level, g["high_level"].as_bool().unwrap());
    }
}

mod ten_sets {
    use vren_core::notation::{lint_match, parse_match};
    use vren_core::stats::{serve_receive_distribution, set_location_distribution, system_split};
    use vren_core::{ServeType, SetLocation, Team, ZoneId};

    const FIXTURE: &str = include_str!("fixtures/ten_sets.vren");

    #[test]
    fn hand_counted_shares() {
        let m = parse_match(FIXTURE).unwrap();
        assert!(lint_match(&m).is_empty());
        let matches = [m];

        let dist = set_location_distribution(&matches, None).unwrap();
        let expected = [(SetLocation::Outside, 50.0), (SetLocation::Quick, 30.0), (SetLocation::Oppo, 20.0)];
        assert_eq!(dist.len(), 3);
        for (loc, pct) in expected {
            assert!((dist[&loc] - pct).abs() < 1e-9, "{loc}");
        }

        let (i, o) = system_split(&matches, Team::A).unwrap();
        assert!((i - 70.0).abs() < 1e-9 && (o - 30.0).abs() < 1e-9);

        let jump = serve_receive_distribution(&matches, Some(ServeType::Jump));
        let z = |n| ZoneId::new(n).unwrap();
        assert_eq!(jump.into_iter().collect::<Vec<_>>(), vec![(z(2), 1), (z(3), 2)]);
        assert!(serve_receive_distribution(&matches, Some(ServeType::Hybrid)).is_empty());
    }
}
