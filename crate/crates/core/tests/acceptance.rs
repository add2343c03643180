//! Acceptance criteria 1-11. Prints one PASS/FAIL line per criterion with
//! its wall-clock time and exits nonzero if any criterion fails.

mod support;

use std::time::{Duration, Instant};

use transurf_core::expr::{parse_param_triple, parse_poly};
use transurf_core::genlab::{implicitize, roundtrip_check, InstanceSpec, DEFAULT_DEGREE_BUDGET};
use transurf_core::poly::resultant;
use transurf_core::surface::{
    candidate_vectors, check_certificate, classify_surface, directional, verify_surface_param, CandidateVector,
    Classification, Config,
};
use transurf_core::{MPoly, SurfaceParam, VarSet, Q};

const F_PARABOLOID: &str = "x3+5*x1^2-6*x1*x2+2*x2^2";
const F_SEPTIC: &str = "2*x1*x3^3*x2-2*x1*x3^2*x2-3*x1*x3*x2+4*x1^2*x3*x2+10*x3^2*x2+5*x1*x2+2*x1*x3^5\
    -x3^3*x2^2+x3^3*x1^3+2*x3^5*x2-x1^3*x2-4*x1^2*x3^4-x3^7-6*x2^2+x1^3-x1^2-8*x3^4-2*x3^5-15*x3^2\
    -x3^3+x2^3+12*x2+5*x1*x3^2+9*x3^3*x1-4*x1^2*x3+2*x3^3*x2-2*x1*x2^2+x1^2*x2+6*x3*x1+4*x3*x2\
    -x3^3*x1^2-11*x3-2*x1-3*x1^2*x3^2+x3^4*x2-2*x3^2*x2^2-9";
const F_QUARTIC: &str = "x1^4-2*x3+7*x3*x1+2*x2^2-5*x2*x3+x3^2+2*x1^3-10*x1^2*x2-2*x3*x1^2+7*x1*x2^2-x2^3";

fn poly(s: &str) -> MPoly {
    parse_poly(s, &VarSet::space()).expect("well-formed input")
}

fn pair(p1: &str, p2: &str) -> SurfaceParam {
    SurfaceParam::new(parse_param_triple(p1, "t").unwrap(), parse_param_triple(p2, "t").unwrap())
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Classify under `cfg` and require a translational result whose certificate
/// passes the independent checks.
fn translational(f: &MPoly, cfg: &Config) -> Result<(SurfaceParam, CandidateVector), String> {
    match classify_surface(f, cfg).map_err(|e| e.to_string())? {
        Classification::Translational(sp, cert) => {
            check_certificate(f, &sp, &cert)?;
            Ok((sp, cert.vector))
        }
        other => Err(format!("expected translational, got {other:?}")),
    }
}

fn forced(v: [i64; 3]) -> Config {
    Config { vectors: Some(vec![CandidateVector::from_ints(v)]), ..Config::default() }
}

fn c1() -> Result<(), String> {
    let sp = pair("t, (4*t+1)/2, -(2*t^2+2*t+1)/2", "t, t, -t^2+t");
    ensure(verify_surface_param(&poly(F_PARABOLOID), &sp), "pair does not verify")
}

fn c2() -> Result<(), String> {
    let f = poly(F_PARABOLOID);
    let (_, vector) = translational(&f, &Config::default())?;
    let first: Vec<CandidateVector> = candidate_vectors(&Config::default()).into_iter().take(7).collect();
    ensure(first.contains(&vector), format!("vector {vector} not among the first 7 candidates"))
}

fn c3() -> Result<(), String> {
    let f = poly(F_SEPTIC);
    translational(&f, &Config::default())?;
    let sp = pair("t, (1+t^2)/t^2, 1/t", "t^2, t^3, t");
    ensure(verify_surface_param(&f, &sp), "reference pair does not verify")
}

fn c4() -> Result<(), String> {
    let f = poly(F_QUARTIC);
    for v in [[1, 0, 0], [0, 0, 1]] {
        translational(&f, &forced(v)).map_err(|e| format!("vector {v:?}: {e}"))?;
    }
    let pairs = [
        ("t, t, t^2", "t, t^2, t^3"),
        ("t-1/2, t-1/2, (t-1/2)^2", "t+1/2, (t+1/2)^2, (t+1/2)^3"),
        ("t, t-1/4, 3/8-t+t^2", "t, t+t^2, 3/4*t+3/2*t^2+t^3"),
    ];
    for (a, b) in pairs {
        ensure(verify_surface_param(&f, &pair(a, b)), format!("pair ({a}) + ({b}) does not verify"))?;
    }
    Ok(())
}

fn c5() -> Result<(), String> {
    translational(&poly(F_QUARTIC), &forced([1, 1, 1])).map(|_| ())
}

fn c6() -> Result<(), String> {
    let f = poly(F_PARABOLOID);
    let g = directional(&f, &CandidateVector::from_ints([1, 1, 1]));
    let r = resultant(&f, &g, 2).map_err(|e| e.to_string())?;
    ensure(r.is_associate(&poly("4*x1-2*x2+1")), format!("resultant is {r}"))
}

fn c7() -> Result<(), String> {
    let cases = [
        (pair("t, t, t^2", "t, t^2, t^3"), F_QUARTIC),
        (pair("t, (4*t+1)/2, -(2*t^2+2*t+1)/2", "t, t, -t^2+t"), F_PARABOLOID),
    ];
    for (sp, expected) in cases {
        let f = implicitize(&sp, DEFAULT_DEGREE_BUDGET).map_err(|e| e.to_string())?;
        ensure(f.is_associate(&poly(expected)), format!("implicitized {f}"))?;
    }
    Ok(())
}

fn c8() -> Result<(), String> {
    match classify_surface(&poly("x1^2+x2^2-1"), &Config::default()).map_err(|e| e.to_string())? {
        Classification::Cylinder(d) => ensure(d == [q(0), q(0), q(1)], format!("direction {d:?}"))?,
        other => return Err(format!("circle: {other:?}")),
    }
    let f = poly("x1+2*x2+x3+4");
    match classify_surface(&f, &Config::default()).map_err(|e| e.to_string())? {
        Classification::Plane(sp) => {
            ensure(verify_surface_param(&f, &sp), "plane parametrization does not verify")?;
            ensure(sp == pair("t, 0, -t-4", "0, t, -2*t"), format!("plane shape {} + {}", sp.p1, sp.p2))
        }
        other => Err(format!("plane: {other:?}")),
    }
}

fn c9() -> Result<(), String> {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let report = roundtrip_check(&InstanceSpec::default(), 50, &Config::default(), threads);
    ensure(
        report.count == 50 && report.passed == 50,
        format!("{}/{} passed; failing seeds {:?}; {:?}", report.passed, report.count, report.failing_seeds, report.failures),
    )
}

fn c10() -> Result<(), String> {
    let mut failed = Vec::new();
    for (name, suite) in support::all_suites() {
        if let Err(e) = suite() {
            failed.push(format!("{name}: {e}"));
        }
    }
    ensure(failed.is_empty(), failed.join("; "))
}

fn c11() -> Result<(), String> {
    match classify_surface(&poly("x1^2+x2^2+x3^2-1"), &Config::default()).map_err(|e| e.to_string())? {
        Classification::Undecided(log) => ensure(!log.is_empty(), "empty evidence log"),
        other => Err(format!("expected undecided, got {other:?}")),
    }
}

fn main() {
    let criteria: [(u32, Option<u64>, fn() -> Result<(), String>); 11] = [
        (1, Some(1), c1),
        (2, Some(5), c2),
        (3, Some(30), c3),
        (4, Some(10), c4),
        (5, None, c5),
        (6, None, c6),
        (7, None, c7),
        (8, None, c8),
        (9, Some(300), c9),
        (10, None, c10),
        (11, None, c11),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (n, limit, check) in criteria {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = match (outcome, limit.map(Duration::from_secs)) {
            (Ok(()), Some(l)) if took > l => Err(format!("took {took:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(()) => println!("criterion {n:>2}: PASS ({:.2?})", took),
            Err(e) => {
                failures += 1;
                println!("criterion {n:>2}: FAIL ({:.2?}) {e}", took);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
