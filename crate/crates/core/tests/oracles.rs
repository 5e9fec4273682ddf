// Library results against oracles written from scratch here: naive box
// enumeration, direct exponential sums and closed-form theta constants.

use modlat::lattice::{catalog, theta_coefficients, GramMatrix, DEFAULT_BUDGET};
use modlat::modform::ThetaDecomposition;
use modlat::rational::{int, rat, to_f64};
use modlat::secrecy::{eval_theta_numeric, secrecy_function, theta3, ThetaSource};
use modlat::theta::{expand_kind, FormKind};
use num_rational::BigRational;
use proptest::prelude::*;
use std::f64::consts::PI;

/// Every x in the box `|x_i| <= r`, norms below `max` tallied by exact value.
fn box_counts(g: &[Vec<BigRational>], r: i64, max: &BigRational) -> Vec<(BigRational, u64)> {
    let n = g.len();
    let mut tally = std::collections::BTreeMap::new();
    let mut x = vec![-r; n];
    loop {
        let mut norm = int(0);
        for i in 0..n {
            for j in 0..n {
                norm += &g[i][j] * int(x[i] * x[j]);
            }
        }
        if &norm <= max {
            *tally.entry(norm).or_insert(0u64) += 1;
        }
        let mut i = 0;
        while i < n && x[i] == r {
            x[i] = -r;
            i += 1;
        }
        if i == n {
            break;
        }
        x[i] += 1;
    }
    tally.into_iter().collect()
}

fn gram_strategy() -> impl Strategy<Value = (Vec<Vec<i64>>, i64)> {
    (2usize..=4).prop_flat_map(|n| (proptest::collection::vec(proptest::collection::vec(-2i64..=2, n), n), 1i64..=3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // G = (B B^T + I) / d satisfies x.Gx >= |x|^2 / d, so |x_i| <= sqrt(max d) covers every short vector.
    #[test]
    fn enumeration_matches_box_search((b, d) in gram_strategy()) {
        let n = b.len();
        let g: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let dot: i64 = (0..n).map(|k| b[i][k] * b[j][k]).sum();
                        rat(dot + i64::from(i == j), d)
                    })
                    .collect()
            })
            .collect();
        let max = int(5);
        let r = ((5 * d) as f64).sqrt().floor() as i64;
        let want = box_counts(&g, r, &max);
        let gram = GramMatrix::new(g).unwrap();
        let got = theta_coefficients(&gram, &max, DEFAULT_BUDGET).unwrap();
        let got: Vec<_> = got.pairs().into_iter().filter(|(_, c)| *c > 0).collect();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn theta3_expansion_is_sum_of_squares() {
    let s = expand_kind(FormKind::Theta3, 50);
    for m in 0..50i64 {
        let reps = (-8i64..=8).filter(|k| k * k == m).count() as i64;
        assert_eq!(s.coeff(m).unwrap(), int(reps), "q^{m}");
    }
}

#[test]
fn theta3_value_matches_direct_sum() {
    for y in [0.15, 0.5, 1.0, 2.0, 7.0] {
        let direct: f64 = (-400i64..=400).map(|k| (-PI * y * (k * k) as f64).exp()).sum();
        let got = theta3(y);
        assert!((got.value - direct).abs() <= 1e-13 * direct + got.err, "y={y}");
    }
    // theta3(i) = pi^(1/4) / Gamma(3/4)
    let closed = PI.powf(0.25) / 1.225_416_702_465_177_6;
    assert!((theta3(1.0).value - closed).abs() < 1e-14);
}

#[test]
fn d4_numeric_theta_from_counts_gram_and_forms() {
    let d4 = catalog("D4").unwrap().gram;
    let counts = theta_coefficients(&d4, &int(60), DEFAULT_BUDGET).unwrap();
    let poly = ThetaDecomposition::parse("Theta_D4").unwrap();
    for y in [0.4, 1.0 / 2f64.sqrt(), 1.3] {
        let direct: f64 = counts
            .pairs()
            .iter()
            .map(|(n, c)| *c as f64 * (-PI * y * to_f64(n)).exp())
            .sum();
        let via_gram = eval_theta_numeric(ThetaSource::Gram(&d4), y, 1e-13).unwrap();
        let via_form = eval_theta_numeric(ThetaSource::Decomposition(&poly), y, 1e-13).unwrap();
        assert!((via_gram.value - direct).abs() < 1e-11, "gram path at y={y}");
        assert!((via_form.value - direct).abs() < 1e-11, "form path at y={y}");
    }
}

#[test]
fn unimodular_cubic_has_flat_secrecy() {
    for y in [0.3, 1.0, 3.0] {
        let xi = secrecy_function(ThetaSource::Cubic(5), 1, 5, y, 1e-12).unwrap().xi;
        assert!((xi - 1.0).abs() < 1e-14);
    }
}

#[test]
fn e8_gain_is_its_known_value() {
    // theta3(1)^8 / Theta_E8(i) with Theta_E8 = (theta2^8 + theta3^8 + theta4^8) / 2 and
    // theta2(i) = theta4(i) = 2^(-1/4) theta3(i) gives 4/3.
    let e8 = catalog("E8").unwrap().gram;
    let xi = secrecy_function(ThetaSource::Gram(&e8), 1, 8, 1.0, 1e-13).unwrap().xi;
    assert!((xi - 4.0 / 3.0).abs() < 1e-11, "{xi}");
}
