// Acceptance run for the whole pipeline. Each criterion prints exactly one
// PASS/FAIL line; the process exits non-zero if any of them fails.
//
// Tolerances are pinned here rather than borrowed from the library so that a
// change to a library default cannot silently loosen a check.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use modlat::codes::{
    coset_completeness, construction_a_gram, enumerate_codewords, length_weight_enumerator, lwe_of_words,
    theta_from_lwe, CodeOverR,
};
use modlat::lattice::{catalog, theta_coefficients, ThetaCounts, DEFAULT_BUDGET};
use modlat::modform::{
    build_basis, expand_decomposition, known_from_counts, parse_known, solve_coefficients, BasisKind, BasisSpec,
    ThetaDecomposition,
};
use modlat::rational::{int, rat};
use modlat::secrecy::{
    locate_maximum, secrecy_curve, secrecy_function, symmetry_point_db, weak_secrecy_gain, ThetaSource,
};
use modlat::tables::{load_table, TableId, TableRow};
use modlat::theta::{verify_form_identities, verify_theta_eta_identities};
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const GAIN_TOL: f64 = 1e-5;
const SYMMETRY_TOL: f64 = 1e-9;
const PEAK_DB_TOL: f64 = 1e-4;
const PEAK_VALUE_TOL: f64 = 1e-5;
const EPS: f64 = 1e-13;
const ROUND_TRIPS: u32 = 200;

const BW16_PEAK: f64 = 2.20564;
const DIM8_LWE: &str = "a^4 + 4a^2d^2 + 16abcd + 8ad^3 + 8b^3d + 4b^2c^2 + 24bcd^2 + 8c^3d + 8d^4";

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn run(id: u32, title: &str, budget: Option<Duration>, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(f));
    let took = start.elapsed();
    let (mut ok, mut detail) = match res {
        Ok(o) => (o.ok, o.detail),
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            (false, format!("panicked: {msg}"))
        }
    };
    if let Some(limit) = budget {
        if took > limit {
            ok = false;
            detail = format!("{detail}; over the {:.0} s runtime target", limit.as_secs_f64());
        }
    }
    println!(
        "criterion {id} [{}] {title} ({:.2} s): {detail}",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64()
    );
    ok
}

fn rows(id: TableId) -> Vec<TableRow> {
    load_table(id).expect("bundled table loads")
}

/// Leading coefficients for a row, enumerated from its Gram matrix when one is catalogued.
fn known_for(row: &TableRow, basis: &BasisSpec) -> Vec<(BigRational, BigRational)> {
    if let Some(name) = &row.catalog {
        let entry = catalog(name).expect("catalogued lattice");
        let top = *basis.solving_exponents().last().expect("non-empty basis");
        let counts = theta_coefficients(&entry.gram, &int(top), DEFAULT_BUDGET).expect("enumeration");
        known_from_counts(&counts)
    } else {
        parse_known(row.known.as_deref().expect("row lists known coefficients")).expect("known parses")
    }
}

fn criterion_1() -> Outcome {
    let mut bad = Vec::new();
    let table = rows(TableId::Even);
    for row in &table {
        let printed = row.decomposition().expect("printed polynomial parses");
        let known = known_for(row, &printed.basis);
        let solved = match solve_coefficients(&printed.basis, &known) {
            Ok(d) => d,
            Err(e) => {
                bad.push(format!("{}: solve failed ({e})", row.name));
                continue;
            }
        };
        if solved != printed {
            bad.push(format!("{}: solved {solved}, printed {printed}", row.name));
        }
        let gain = weak_secrecy_gain(ThetaSource::Decomposition(&solved), row.ell, row.dim, EPS)
            .expect("gain evaluates")
            .xi;
        let diff = (gain - row.printed_gain()).abs();
        if diff > GAIN_TOL {
            bad.push(format!("{}: gain {gain:.6} vs printed {} (diff {diff:.1e})", row.name, row.gain));
        }
    }
    let n = table.len();
    if bad.is_empty() {
        outcome(true, format!("{n}/{n} rows re-solve exactly, gains within {GAIN_TOL:e}"))
    } else {
        outcome(false, format!("{} mismatch(es): {}", bad.len(), bad.join("; ")))
    }
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    let table = rows(TableId::Odd);
    for row in &table {
        let d = row.decomposition().expect("printed polynomial parses");
        let gain = weak_secrecy_gain(ThetaSource::Decomposition(&d), row.ell, row.dim, EPS)
            .expect("gain evaluates")
            .xi;
        if (gain - row.printed_gain()).abs() > GAIN_TOL {
            bad.push(format!("{}: {gain:.6} vs {}", row.name, row.gain));
        }
    }

    let code = CodeOverR::fixture("PSole_dim8").expect("fixture");
    let words = enumerate_codewords(&code, 1_000).expect("81 words");
    if words.len() != 81 {
        bad.push(format!("dim8 chain: {} codewords", words.len()));
    }
    let lwe = lwe_of_words(code.rows().len(), &words);
    if lwe.to_string() != DIM8_LWE {
        bad.push(format!("dim8 chain: lwe {lwe}"));
    }
    let theta = theta_from_lwe(&lwe, &int(5)).expect("substitution");
    let expected_theta = [1, 0, 32, 128, 240];
    for (e, want) in expected_theta.iter().enumerate() {
        let got = theta.coeff(e as i64).expect("integral exponent");
        if got != int(*want) {
            bad.push(format!("dim8 chain: theta coefficient at {e} is {got}"));
        }
    }
    let basis = build_basis(2, 8, BasisKind::GeneralLemma2).expect("basis");
    let known: Vec<_> = basis
        .solving_exponents()
        .into_iter()
        .map(|e| (int(e), theta.coeff(e).expect("in range")))
        .collect();
    let d = solve_coefficients(&basis, &known).expect("solve");
    if d.coeffs != vec![int(1), int(-8), int(0)] {
        bad.push(format!("dim8 chain: coefficients {d}"));
    }
    let gain = weak_secrecy_gain(ThetaSource::Decomposition(&d), 2, 8, EPS).expect("gain").xi;
    if (gain - 1.22672).abs() > GAIN_TOL {
        bad.push(format!("dim8 chain: gain {gain:.6}"));
    }

    if bad.is_empty() {
        outcome(
            true,
            format!("{} gains within {GAIN_TOL:e}; code chain 81 words -> lwe -> theta -> (1, -8, 0) -> {gain:.6}", table.len()),
        )
    } else {
        outcome(false, bad.join("; "))
    }
}

fn criterion_3() -> Outcome {
    let code = CodeOverR::fixture("PSole_dim8").expect("fixture");
    let lwe = length_weight_enumerator(&code, 1_000).expect("lwe");
    let via_lwe = theta_from_lwe(&lwe, &int(7)).expect("substitution");
    let gram = construction_a_gram(&code).expect("gram");
    let det = gram.determinant();
    let counts = theta_coefficients(&gram, &int(6), DEFAULT_BUDGET).expect("enumeration");
    let via_gram = counts.to_qseries();
    let mut bad = Vec::new();
    if det != int(16) {
        bad.push(format!("det {det}"));
    }
    for e in 0..=6 {
        let a = via_lwe.coeff(e).expect("lwe side");
        let b = via_gram.coeff(e).expect("gram side");
        if a != b {
            bad.push(format!("norm {e}: lwe {a} vs enumeration {b}"));
        }
    }
    // the enumeration grid is finer than the integers; nothing may sit off them
    let stray: Vec<_> = counts.pairs().into_iter().filter(|(n, _)| !n.is_integer()).collect();
    if !stray.is_empty() {
        bad.push(format!("non-integral norms {stray:?}"));
    }
    if bad.is_empty() {
        outcome(true, format!("coefficients agree through norm 6 ({counts}), det 16"))
    } else {
        outcome(false, bad.join("; "))
    }
}

fn criterion_4() -> Outcome {
    let order = int(12);
    let base = verify_theta_eta_identities(&order);
    let forms = verify_form_identities(&order).expect("form identities run");
    let (lhs, rhs) = coset_completeness(&order).expect("coset thetas");
    let mut failed: Vec<String> = base
        .checks
        .iter()
        .chain(forms.checks.iter())
        .filter(|c| !c.passed)
        .map(|c| c.name.clone())
        .collect();
    if !lhs.agrees_with(&rhs) {
        failed.push("coset completeness".into());
    }
    let total = base.checks.len() + forms.checks.len() + 1;
    if failed.is_empty() {
        outcome(true, format!("{total} identities exact through order 12"))
    } else {
        outcome(false, format!("failed: {}", failed.join(", ")))
    }
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    let mut worst_sym = 0f64;
    let mut worst_db = 0f64;
    let mut worst_val = 0f64;
    let mut count = 0;
    for row in rows(TableId::Even).iter().chain(rows(TableId::Odd).iter()) {
        count += 1;
        let d = row.decomposition().expect("parses");
        let src = ThetaSource::Decomposition(&d);
        let ell = f64::from(row.ell);
        for i in 0..20 {
            let y = 0.2 * 25f64.powf(i as f64 / 19.0);
            let a = secrecy_function(src, row.ell, row.dim, y, EPS).expect("xi").xi;
            let b = secrecy_function(src, row.ell, row.dim, 1.0 / (ell * y), EPS).expect("xi").xi;
            let diff = (a - b).abs();
            worst_sym = worst_sym.max(diff);
            if diff >= SYMMETRY_TOL {
                bad.push(format!("{}: asymmetry {diff:.1e} at y={y:.4}", row.name));
            }
        }
        let chi = weak_secrecy_gain(src, row.ell, row.dim, EPS).expect("gain").xi;
        let peak = locate_maximum(src, row.ell, row.dim, (-6.0, 3.0), 1e-7, EPS).expect("maximum");
        let ddb = (peak.y_db - symmetry_point_db(row.ell)).abs();
        let dval = (peak.xi - chi).abs();
        worst_db = worst_db.max(ddb);
        worst_val = worst_val.max(dval);
        if ddb > PEAK_DB_TOL || dval > PEAK_VALUE_TOL || peak.multimodal {
            bad.push(format!(
                "{}: maximum at {:.6} dB ({} grid peaks), xi {:.7} vs weak gain {chi:.7}",
                row.name, peak.y_db, peak.grid_peaks, peak.xi
            ));
        }
    }
    if bad.is_empty() {
        outcome(
            true,
            format!(
                "{count} lattices; worst asymmetry {worst_sym:.1e}, peak offset {worst_db:.1e} dB, peak vs weak gain {worst_val:.1e}"
            ),
        )
    } else {
        outcome(false, bad.join("; "))
    }
}

fn criterion_6() -> Outcome {
    let cases = [
        ("A2", "Theta_A2"),
        ("D4", "Theta_D4"),
        ("E8", "Theta_E8"),
        ("ExampleDim8", "f1^4 - 8*f1^2*Delta_4"),
        ("BW16", "Theta_D4^4 - 96*Delta_16"),
    ];
    let mut bad = Vec::new();
    let mut seen = Vec::new();
    for (name, poly) in cases {
        let entry = catalog(name).expect("catalogued");
        let counts: ThetaCounts = theta_coefficients(&entry.gram, &int(8), DEFAULT_BUDGET).expect("enumeration");
        let d = ThetaDecomposition::parse(poly).expect("parses");
        let closed = expand_decomposition(&d, 9);
        for e in 0..=8 {
            let want = closed.coeff(e).expect("closed form");
            let got = counts.count_at(&int(e)).unwrap_or(0);
            if want != int(got as i64) {
                bad.push(format!("{name}: norm {e} enumerated {got}, closed form {want}"));
            }
        }
        let off_grid = counts.pairs().iter().any(|(n, c)| !n.is_integer() && *c > 0);
        if off_grid {
            bad.push(format!("{name}: non-integral norms"));
        }
        seen.push(format!("{name} {}", counts.count_at(&int(8)).unwrap_or(0)));
    }
    if bad.is_empty() {
        outcome(true, format!("norm-8 counts match: {}", seen.join(", ")))
    } else {
        outcome(false, bad.join("; "))
    }
}

fn shapes() -> Vec<BasisSpec> {
    let mut out = Vec::new();
    for (ell, kind) in [(1, BasisKind::EvenLemma1), (2, BasisKind::EvenLemma1), (3, BasisKind::EvenLemma1)] {
        let step: u32 = match ell {
            1 => 8,
            2 => 4,
            _ => 2,
        };
        for n in (step..=32).step_by(step as usize) {
            if let Ok(b) = build_basis(ell, n, kind) {
                out.push(b);
            }
        }
    }
    for n in (2u32..=32).step_by(2) {
        if let Ok(b) = build_basis(2, n, BasisKind::GeneralLemma2) {
            out.push(b);
        }
    }
    out
}

fn round_trip(basis: &BasisSpec, runner: &mut TestRunner) -> std::result::Result<(), String> {
    let len = basis.terms.len();
    let top = *basis.solving_exponents().last().expect("non-empty");
    let strategy = proptest::collection::vec((-5000i64..5000, 1i64..7), len);
    runner
        .run(&strategy, |raw| {
            let coeffs: Vec<BigRational> = raw.iter().map(|&(p, q)| rat(p, q)).collect();
            let d = ThetaDecomposition::new(basis.clone(), coeffs).expect("shape matches");
            let series = expand_decomposition(&d, top + 1);
            let known: Vec<_> = basis
                .solving_exponents()
                .into_iter()
                .map(|e| (int(e), series.coeff(e).expect("within order")))
                .collect();
            let back = solve_coefficients(basis, &known).expect("solvable");
            prop_assert_eq!(back, d);
            Ok(())
        })
        .map_err(|e| format!("{} n={}: {e}", basis.kind.name(), basis.n))
}

fn criterion_7() -> Outcome {
    let all = shapes();
    let mut bad = Vec::new();
    for basis in &all {
        let mut runner = TestRunner::new(Config { cases: ROUND_TRIPS, failure_persistence: None, ..Config::default() });
        if let Err(e) = round_trip(basis, &mut runner) {
            bad.push(e);
        }
    }
    if bad.is_empty() {
        outcome(true, format!("{} basis shapes x {ROUND_TRIPS} random decompositions round-trip exactly", all.len()))
    } else {
        outcome(false, bad.join("; "))
    }
}

/// Vertex of the parabola through three equally spaced samples.
fn parabolic_vertex(x: [f64; 3], f: [f64; 3]) -> (f64, f64) {
    let h = x[1] - x[0];
    let curv = f[0] - 2.0 * f[1] + f[2];
    let shift = h * (f[0] - f[2]) / (2.0 * curv);
    (x[1] + shift, f[1] - (f[0] - f[2]).powi(2) / (8.0 * curv))
}

fn criterion_8() -> Outcome {
    let d = ThetaDecomposition::parse("Theta_D4^4 - 96*Delta_16").expect("parses");
    let src = ThetaSource::Decomposition(&d);
    let curve = secrecy_curve(src, 2, 16, (-6.0, 3.0), 200, EPS).expect("curve");
    let centre = symmetry_point_db(2);
    let mut bad = Vec::new();

    let top = (0..curve.len()).max_by(|&a, &b| curve[a].1.total_cmp(&curve[b].1)).expect("samples");
    let rising = curve[..=top].windows(2).all(|w| w[1].1 > w[0].1);
    let falling = curve[top..].windows(2).all(|w| w[1].1 < w[0].1);
    if !(rising && falling) {
        bad.push("samples are not unimodal".to_string());
    }

    let mut worst = 0f64;
    for &(db, xi) in &curve {
        let mirror = 2.0 * centre - db;
        let other = secrecy_function(src, 2, 16, 10f64.powf(mirror / 10.0), EPS).expect("xi").xi;
        worst = worst.max((xi - other).abs());
    }
    if worst >= SYMMETRY_TOL {
        bad.push(format!("mirror asymmetry {worst:.1e}"));
    }

    if top == 0 || top + 1 == curve.len() {
        bad.push("peak sits on the range boundary".to_string());
        return outcome(false, bad.join("; "));
    }
    let (at, peak) = parabolic_vertex(
        [curve[top - 1].0, curve[top].0, curve[top + 1].0],
        [curve[top - 1].1, curve[top].1, curve[top + 1].1],
    );
    if (at - centre).abs() > 1e-2 {
        bad.push(format!("sampled peak at {at:.4} dB"));
    }
    if (peak - BW16_PEAK).abs() > PEAK_VALUE_TOL {
        bad.push(format!("sampled peak {peak:.7}"));
    }
    let refined = locate_maximum(src, 2, 16, (-6.0, 3.0), 1e-7, EPS).expect("maximum");
    if (refined.xi - BW16_PEAK).abs() > PEAK_VALUE_TOL || (refined.y_db - centre).abs() > PEAK_DB_TOL {
        bad.push(format!("refined peak {:.7} at {:.6} dB", refined.xi, refined.y_db));
    }

    if bad.is_empty() {
        outcome(
            true,
            format!(
                "200 samples unimodal, mirror asymmetry {worst:.1e}; peak {peak:.7} at {at:.4} dB from samples, {:.7} at {:.6} dB refined",
                refined.xi, refined.y_db
            ),
        )
    } else {
        outcome(false, bad.join("; "))
    }
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "even table re-solve and gains", Some(secs(10)), criterion_1),
        run(2, "odd table gains and code chain", Some(secs(30)), criterion_2),
        run(3, "code enumerator vs Gram enumeration", Some(secs(5)), criterion_3),
        run(4, "theta/eta identity suite", None, criterion_4),
        run(5, "secrecy symmetry and maxima", None, criterion_5),
        run(6, "enumeration vs closed forms", Some(secs(60)), criterion_6),
        run(7, "decomposition round trips", None, criterion_7),
        run(8, "BW16 curve", None, criterion_8),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
