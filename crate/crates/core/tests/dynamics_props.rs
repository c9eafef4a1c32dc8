//! Property tests for attraction, cycles, reduction, heights and the search.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use ultradyn::dynamics::{
    attraction_disk, count_attracting_cycles, find_attracted_critical_cycle, good_reduction, pcf_check, CycleRep,
    PcfConfig, ReductionVerdict,
};
use ultradyn::exactnum::{val, Prime, Rational, Valuation};
use ultradyn::heights::{height_algebraic, height_rational, log_mahler_measure, multiplier_heights, HEIGHT_TOLERANCE};
use ultradyn::newton::newton_polygon;
use ultradyn::ratfunc::{fixed_multiplier_poly, sigma_invariants, Mobius, Poly, RatMap};
use ultradyn::search::{grid, northcott_set, search, Family, SearchConfig};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn zi(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn pr(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn ppow(p: u64, k: i64) -> Rational {
    let b = zi(p as i64);
    if k >= 0 {
        num_traits::pow(b, k as usize)
    } else {
        num_traits::pow(b.recip(), (-k) as usize)
    }
}

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=30).prop_map(|(n, d)| q(n, d))
}

fn int_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-6i64..=6, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

fn map_of_degree(d: usize) -> impl Strategy<Value = RatMap> {
    (int_poly(d), int_poly(d)).prop_filter_map("exact degree", move |(n, m)| {
        RatMap::new(n, m).ok().filter(|f| f.degree() == d)
    })
}

/// Möbius maps with integer entries and determinant ±1: good reduction at every prime.
fn unimodular() -> impl Strategy<Value = Mobius> {
    (-4i64..=4, -4i64..=4, -4i64..=4, -4i64..=4).prop_filter_map("det ±1", |(a, b, c, d)| {
        if (a * d - b * c).abs() == 1 {
            Mobius::new(zi(a), zi(b), zi(c), zi(d)).ok()
        } else {
            None
        }
    })
}

fn quad(c: &Rational) -> RatMap {
    RatMap::polynomial(Poly::new(vec![c.clone(), Rational::zero(), zi(1)]))
}

/// (degree, height) per multiplier factor, repeated by multiplicity.
fn sorted_heights(phi: &RatMap) -> Vec<(usize, i64)> {
    let h = multiplier_heights(phi, 1).unwrap();
    let mut out: Vec<(usize, i64)> = h
        .factors
        .iter()
        .chain(h.infinity.iter())
        .flat_map(|f| std::iter::repeat((f.degree, (f.height.approx * 1e6).round() as i64)).take(f.multiplicity))
        .collect();
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn basin_contracts_exactly(
        p in prop::sample::select(vec![2u64, 3, 5, 7]),
        k in 1i64..=3,
        u in 1i64..=6,
        a in -5i64..=5,
        b in -5i64..=5,
        g in rational(),
        e_extra in 1i64..=3,
        t in 1i64..=6,
    ) {
        prop_assume!(u % p as i64 != 0 && t % p as i64 != 0 && a != 0);
        let lambda = zi(u) * ppow(p, k);
        // z(λ + a z)/(1 + b z), moved so that the fixed point sits at g
        let phi0 = RatMap::new(
            Poly::new(vec![Rational::zero(), lambda.clone(), zi(a)]),
            Poly::new(vec![zi(1), zi(b)]),
        ).unwrap();
        prop_assume!(phi0.degree() == 2);
        let phi = phi0.conjugate(&Mobius::translation(-g.clone()));
        let rho = attraction_disk(&phi, &g, pr(p)).unwrap();
        let e = rho.floor().to_integer().to_i64().unwrap() + e_extra;
        let x = &g + zi(t) * ppow(p, e);
        let y = phi.eval_finite(&x);
        let y = y.finite().cloned();
        prop_assume!(y.is_some());
        let v = val(&(y.unwrap() - &g), pr(p));
        prop_assert_eq!(v, Valuation::int(k + e));
    }

    #[test]
    fn multiplier_polynomial_is_conjugation_invariant(phi in map_of_degree(2), m in unimodular()) {
        let psi = phi.conjugate(&m);
        prop_assert_eq!(fixed_multiplier_poly(&phi).unwrap(), fixed_multiplier_poly(&psi).unwrap());
    }

    #[test]
    fn multiplier_heights_are_conjugation_invariant(phi in map_of_degree(2), m in unimodular()) {
        let psi = phi.conjugate(&m);
        prop_assert_eq!(sorted_heights(&phi), sorted_heights(&psi));
    }

    #[test]
    fn silverman_relation(phi in map_of_degree(2)) {
        let s = sigma_invariants(&phi).unwrap();
        prop_assert_eq!(s[2].clone(), &s[0] - zi(2));
    }

    #[test]
    fn attracting_cycles_bounded(
        phi in prop_oneof![map_of_degree(2), map_of_degree(3)],
        p in prop::sample::select(vec![5u64, 7, 11]),
    ) {
        let r = count_attracting_cycles(&phi, 2, pr(p)).unwrap();
        prop_assert!(r.hypothesis_holds);
        prop_assert!(r.total_cycles <= 2 * phi.degree() - 2);
    }

    #[test]
    fn pcf_certificates_replay(phi in prop_oneof![
        rational().prop_map(|c| quad(&c)),
        map_of_degree(2),
    ]) {
        let cfg = PcfConfig { max_steps: 24, ..PcfConfig::default() };
        let cert = pcf_check(&phi, &cfg).unwrap();
        prop_assert!(cert.verify(&phi));
    }

    #[test]
    fn bad_reduction_witness_decreases(
        p in prop::sample::select(vec![3u64, 5, 7]),
        u in 1i64..=6,
        k in 1i64..=2,
        lin in -3i64..=3,
    ) {
        prop_assume!(u % p as i64 != 0);
        let c = zi(u) * ppow(p, -k);
        let phi = RatMap::polynomial(Poly::new(vec![c, zi(lin), zi(1)]));
        let r = good_reduction(&phi, pr(p)).unwrap();
        if r.verdict == ReductionVerdict::Bad {
            if let Some(w) = r.escape {
                prop_assert!(w.orbit_valuations.len() >= 5);
                prop_assert!(w.orbit_valuations.windows(2).take(4).all(|v| v[1] < v[0]));
            }
        }
    }

    #[test]
    fn derivative_polygon_is_shifted(
        roots in prop::collection::vec((1i64..=6, 0i64..=3), 1..=4),
        p in prop::sample::select(vec![5u64, 7, 11]),
    ) {
        // z·Π(z - r) with every vertex index prime to p
        let mut f = Poly::x();
        for (u, k) in &roots {
            f = &f * &Poly::linear_root(&(zi(*u) * ppow(p, *k)));
        }
        let np = newton_polygon(&f, pr(p)).unwrap();
        prop_assume!(np.vertices().iter().all(|(i, _)| i % p as usize != 0));
        let dp = newton_polygon(&f.derivative(), pr(p)).unwrap();
        let shifted: Vec<(usize, Rational)> = np.vertices().iter().map(|(i, v)| (i - 1, v.clone())).collect();
        prop_assert_eq!(dp.vertices().to_vec(), shifted);
    }

    #[test]
    fn height_is_inversion_invariant(x in rational()) {
        prop_assume!(!x.is_zero());
        prop_assert!(height_rational(&x).exact_eq(&height_rational(&x.recip())));
    }

    #[test]
    fn mahler_measure_of_linear_products(roots in prop::collection::vec((-30i64..=30, 1i64..=30), 1..=4)) {
        let mut f = Poly::from_ints(&[1]);
        let mut total = 0.0;
        let mut best = 0.0f64;
        for (a, b) in &roots {
            let r = q(*a, *b);
            let lin = Poly::new(vec![-Rational::from_integer(r.numer().clone()), Rational::from_integer(r.denom().clone())]);
            f = &f * &lin;
            let h = height_rational(&r);
            prop_assert!(height_algebraic(&lin).unwrap().exact_eq(&h));
            total += h.approx;
            best = best.max(h.approx);
        }
        let m = log_mahler_measure(&f).unwrap();
        prop_assert!((m.approx - total).abs() <= HEIGHT_TOLERANCE * (1.0 + total));
        prop_assert!(best <= m.approx + HEIGHT_TOLERANCE);
    }
}

#[test]
fn northcott_grid_matches_brute_force() {
    for b in 1..=12i64 {
        let mut brute = BTreeSet::new();
        for num in -b..=b {
            for den in 1..=b {
                let x = q(num, den);
                let (n, d) = (x.numer().clone(), x.denom().clone());
                if n.abs().max(d.clone()) <= BigInt::from(b) {
                    brute.insert(x);
                }
            }
        }
        let got: BTreeSet<Rational> = northcott_set(b as u64).into_iter().collect();
        assert_eq!(got, brute, "B = {b}");
        let slice: BTreeSet<Rational> = grid(Family::PolySlice, b as u64).into_iter().map(|v| v[0].clone()).collect();
        assert_eq!(slice, brute);
        let nf = grid(Family::FixedNormalForm, b as u64);
        let excluded = brute.iter().filter(|x| !x.is_zero() && brute.contains(&x.recip())).count();
        assert_eq!(nf.len(), brute.len() * brute.len() - excluded);
    }
}

#[test]
fn search_hits_are_monotone_and_replay() {
    let mut prev: Vec<Rational> = Vec::new();
    for b in [1u64, 2, 3, 5, 8] {
        let cfg = SearchConfig {
            height_bound: b,
            ..SearchConfig::default()
        };
        let (hits, _) = search(Family::PolySlice, &cfg).unwrap();
        let cs: Vec<Rational> = hits.iter().map(|h| h.parameters[0].clone()).collect();
        assert!(prev.iter().all(|c| cs.contains(c)), "B = {b}: {prev:?} ⊄ {cs:?}");
        for h in &hits {
            let phi = Family::PolySlice.map(&h.parameters).unwrap();
            assert!(h.certificate.verify(&phi));
            assert!(h.silverman_relation_holds());
            assert!(h.corollary13.pass);
        }
        prev = cs;
    }
}

#[test]
fn periodic_cycles_attract_a_critical_point() {
    // c ≡ c₀ mod p with 0 periodic of period n mod p: centers 0, -1 and roots of c³ + 2c² + c + 1
    for p in [3u64, 5, 7, 11, 13] {
        let pi = p as i64;
        for n in 1..=3usize {
            let centers: Vec<i64> = (0..pi)
                .filter(|&c| {
                    let mut x = 0i64;
                    let mut first = None;
                    for k in 1..=n {
                        x = (x * x + c).rem_euclid(pi);
                        if x == 0 && first.is_none() {
                            first = Some(k);
                        }
                    }
                    first == Some(n)
                })
                .collect();
            for c0 in centers {
                for t in [1i64, -2, 3] {
                    let c = zi(c0 + pi * t);
                    let phi = quad(&c);
                    let cert = find_attracted_critical_cycle(&phi, n, &CycleRep::Residue(BigInt::zero()), pr(p), 24)
                        .unwrap_or_else(|e| panic!("{phi}, n = {n}, p = {p}: {e}"));
                    let ev = cert.padic.unwrap();
                    assert!(ev.multiplier_valuation > 0);
                    assert!(ev.orbit_valuations.windows(2).all(|w| w[1] - w[0] == ev.multiplier_valuation));
                }
            }
        }
    }
}
