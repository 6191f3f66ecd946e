//! Characteristic class of the quantized orbit and the trace of the unit,
//! with a Freudenthal multiplicity count as an independent dimension oracle.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{as_integer, fmt_q, q, qf, GaussianRational, MPoly, Poly, Q};
use crate::enveloping::LeviSplit;
use crate::error::{Error, Result};
use crate::rootsys::{RootSystem, Weight};

/// `order0 + t * order1` in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharClass {
    pub order0: Vec<GaussianRational>,
    pub order1: Vec<GaussianRational>,
}

/// The weight `xi` standing for `(i/t) lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RescaledWeight {
    pub xi: Weight,
}

impl RescaledWeight {
    pub fn new(xi: Weight) -> Self {
        RescaledWeight { xi }
    }
}

fn gaussian_coords(w: &Weight, c: &GaussianRational) -> Vec<GaussianRational> {
    w.coords().iter().map(|x| c.scale(x)).collect()
}

/// `i` times the sum of the given weights.
pub fn c1_image(rank: usize, weights: &[Weight]) -> Vec<GaussianRational> {
    let sum = weights.iter().fold(Weight::zero(rank), |acc, w| acc.add(w));
    gaussian_coords(&sum, &GaussianRational::i())
}

/// Half-sum of the roots in the positive half of the split.
pub fn split_rho(split: &LeviSplit) -> Weight {
    let rs = split.algebra().root_system();
    let sum = split.delta_plus().iter().fold(Weight::zero(rs.rank()), |acc, &k| acc.add(&rs.positive_roots()[k].to_weight()));
    sum.scale(&qf(1, 2))
}

/// `-lambda + t i rho`, cross-checked against `-lambda - (t/2) c1(n-)`.
pub fn characteristic_class(split: &LeviSplit) -> Result<CharClass> {
    let rs = split.algebra().root_system();
    let minus_one = GaussianRational::real(q(-1));
    let order0 = gaussian_coords(split.lambda(), &minus_one);
    let order1 = gaussian_coords(&split_rho(split), &GaussianRational::i());
    let lowering: Vec<Weight> = split.delta_plus().iter().map(|&k| rs.positive_roots()[k].to_weight().scale(&q(-1))).collect();
    let via_chern: Vec<GaussianRational> = c1_image(rs.rank(), &lowering).iter().map(|c| c.scale(&qf(-1, 2))).collect();
    if via_chern != order1 {
        return Err(Error::Consistency("first-order class disagrees with the Chern class route".into()));
    }
    Ok(CharClass { order0, order1 })
}

fn split_roots(rs: &RootSystem, split: &LeviSplit) -> Result<Vec<Weight>> {
    let own = split.algebra().root_system();
    if own.name() != rs.name() {
        return Err(Error::Argument(format!("split belongs to {}, not {}", own.name(), rs.name())));
    }
    Ok(split.delta_plus().iter().map(|&k| rs.positive_roots()[k].to_weight()).collect())
}

fn rho_pairings(rs: &RootSystem, roots: &[Weight], rho: &Weight) -> Result<Vec<Q>> {
    roots
        .iter()
        .map(|a| {
            let v = rs.pairing(a, rho)?;
            if v.is_zero() {
                return Err(Error::Argument(format!("degenerate split: <alpha, rho> = 0 for alpha = {a}")));
            }
            Ok(v)
        })
        .collect()
}

/// `prod <alpha, xi + rho> / prod <alpha, rho>` over the positive half of the
/// split.
pub fn quantum_dimension(rs: &RootSystem, split: &LeviSplit, xi: &RescaledWeight) -> Result<Q> {
    let roots = split_roots(rs, split)?;
    let rho = split_rho(split);
    let den = rho_pairings(rs, &roots, &rho)?;
    let shifted = xi.xi.add(&rho);
    let mut out = Q::one();
    for (a, d) in roots.iter().zip(&den) {
        out *= rs.pairing(a, &shifted)? / d;
    }
    Ok(out)
}

/// The same product as a polynomial in the simple-root coordinates of `xi`.
pub fn quantum_dimension_polynomial(rs: &RootSystem, split: &LeviSplit) -> Result<MPoly> {
    let roots = split_roots(rs, split)?;
    let rho = split_rho(split);
    let den = rho_pairings(rs, &roots, &rho)?;
    let r = rs.rank();
    let mut out = MPoly::constant(r, Q::one());
    for (a, d) in roots.iter().zip(&den) {
        let mut factor = MPoly::constant(r, rs.pairing(a, &rho)? / d);
        for j in 0..r {
            let unit = Weight::new((0..r).map(|i| if i == j { Q::one() } else { Q::zero() }).collect());
            factor = factor.add(&MPoly::var(r, j).scale(&(rs.pairing(a, &unit)? / d)));
        }
        out = out.mul(&factor);
    }
    Ok(out)
}

/// Trace of the unit for a rational `lambda` and formal `t`, as a polynomial
/// in `u = i/t`: `prod (<alpha, lambda> u + <alpha, rho>) / prod <alpha, rho>`.
pub fn trace_polynomial(rs: &RootSystem, split: &LeviSplit, lambda: &Weight) -> Result<Poly> {
    let roots = split_roots(rs, split)?;
    let rho = split_rho(split);
    let den = rho_pairings(rs, &roots, &rho)?;
    let mut out = Poly::one();
    for (a, d) in roots.iter().zip(&den) {
        out = &out * &Poly::from_coeffs(vec![rs.pairing(a, &rho)? / d, rs.pairing(a, lambda)? / d]);
    }
    Ok(out)
}

/// Dimension of the irreducible module of highest weight `mu` by the
/// Freudenthal recursion, summing multiplicities level by level.
pub fn freudenthal_dim(rs: &RootSystem, mu: &Weight) -> Result<u64> {
    if !rs.is_dominant_integral(mu)? {
        return Err(Error::Argument(format!("{mu} is not dominant integral")));
    }
    let roots: Vec<Weight> = rs.positive_roots().iter().map(|a| a.to_weight()).collect();
    let rho = rs.rho();
    let top = rs.pairing(&mu.add(&rho), &mu.add(&rho))?;
    let simple: Vec<Weight> = rs.simple_roots().iter().map(|a| a.to_weight()).collect();
    let mut mult: HashMap<Weight, Q> = HashMap::new();
    mult.insert(mu.clone(), Q::one());
    let mut level = vec![mu.clone()];
    let mut total = Q::one();
    while !level.is_empty() {
        let mut next: Vec<Weight> = level.iter().flat_map(|w| simple.iter().map(move |a| w.sub(a))).collect();
        next.sort_by(|a, b| a.coords().cmp(b.coords()));
        next.dedup();
        let mut found = Vec::new();
        for nu in next {
            let gap = &top - rs.pairing(&nu.add(&rho), &nu.add(&rho))?;
            if gap.is_zero() {
                // only possible for nu outside the weight set
                continue;
            }
            let mut acc = Q::zero();
            for a in &roots {
                let mut up = nu.add(a);
                while up.sub(mu).coords().iter().all(|c| c <= &Q::zero()) {
                    if let Some(m) = mult.get(&up) {
                        acc += m * rs.pairing(&up, a)?;
                    }
                    up = up.add(a);
                }
            }
            let m = q(2) * acc / gap;
            if !m.is_zero() {
                total += &m;
                mult.insert(nu.clone(), m);
                found.push(nu);
            }
        }
        level = found;
    }
    as_integer(&total)
        .and_then(|n| u64::try_from(n).ok())
        .ok_or_else(|| Error::Consistency(format!("Freudenthal count {} is not a positive integer", fmt_q(&total))))
}

/// One row of a dimension table, keyed by fundamental-weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionRow {
    pub fundamental: Vec<u32>,
    pub qdim: Q,
    pub freudenthal: u64,
}

impl DimensionRow {
    pub fn matches(&self) -> bool {
        self.qdim == Q::from_integer(self.freudenthal.into())
    }
}

/// Every `xi = sum k_i omega_i` with `0 <= k_i <= grid`, in lexicographic
/// order.
pub fn dimension_table(rs: &RootSystem, split: &LeviSplit, grid: u32) -> Result<Vec<DimensionRow>> {
    let r = rs.rank();
    let fundamentals: Vec<Weight> = (0..r).map(|i| rs.fundamental_weight(i)).collect();
    let mut rows = Vec::new();
    let mut k = vec![0u32; r];
    loop {
        let xi = k.iter().zip(&fundamentals).fold(Weight::zero(r), |acc, (&c, w)| acc.add(&w.scale(&q(c.into()))));
        rows.push(DimensionRow {
            fundamental: k.clone(),
            qdim: quantum_dimension(rs, split, &RescaledWeight::new(xi.clone()))?,
            freudenthal: freudenthal_dim(rs, &xi)?,
        });
        let Some(pos) = (0..r).rev().find(|&i| k[i] < grid) else { break };
        k[pos] += 1;
        for c in k.iter_mut().skip(pos + 1) {
            *c = 0;
        }
    }
    Ok(rows)
}

pub fn table_csv(rank: usize, rows: &[DimensionRow]) -> String {
    let mut s = String::new();
    let cols: Vec<String> = (1..=rank).map(|i| format!("k{i}")).collect();
    writeln!(s, "{},qdim,freudenthal,match", cols.join(",")).unwrap();
    for row in rows {
        let ks: Vec<String> = row.fundamental.iter().map(|k| k.to_string()).collect();
        writeln!(s, "{},{},{},{}", ks.join(","), fmt_q(&row.qdim), row.freudenthal, row.matches()).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enveloping::{centralizer_split, ChevalleyAlgebra};
    use crate::rootsys::Series;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn split(s: Series, r: usize, lam: &[i64]) -> LeviSplit {
        let alg = Arc::new(ChevalleyAlgebra::new(&RootSystem::new(s, r).unwrap()).unwrap());
        centralizer_split(alg, &lam.iter().map(|&x| q(x)).collect::<Vec<_>>()).unwrap()
    }

    fn regular(s: Series, r: usize) -> (RootSystem, LeviSplit) {
        let sp = split(s, r, &vec![1; r]);
        (sp.algebra().root_system().clone(), sp)
    }

    fn g(re: Q, im: Q) -> GaussianRational {
        GaussianRational::new(re, im)
    }

    #[test]
    fn sl2_class() {
        let c = characteristic_class(&split(Series::A, 1, &[3])).unwrap();
        assert_eq!(c.order0, vec![g(qf(-3, 2), q(0))]);
        assert_eq!(c.order1, vec![g(q(0), qf(1, 2))]);
        let doubled = characteristic_class(&split(Series::A, 1, &[6])).unwrap();
        assert_eq!(doubled.order0, vec![g(q(-3), q(0))]);
        assert_eq!(doubled.order1, c.order1);
    }

    #[test]
    fn class_for_partial_flag_uses_split_rho() {
        // lambda = omega_1 on A2: the split holds a1 and a1 + a2
        let c = characteristic_class(&split(Series::A, 2, &[1, 0])).unwrap();
        assert_eq!(c.order1, vec![g(q(0), q(1)), g(q(0), qf(1, 2))]);
    }

    #[test]
    fn c1_image_is_additive() {
        let ws = vec![Weight::new(vec![q(1), q(-2)]), Weight::new(vec![qf(1, 3), q(0)])];
        let once = c1_image(2, &ws);
        let twice = c1_image(2, &[ws.clone(), ws].concat());
        assert_eq!(twice, once.iter().map(|c| c.scale(&q(2))).collect::<Vec<_>>());
        assert!(c1_image(2, &[Weight::zero(2)]).iter().all(|c| c.is_zero()));
    }

    #[test]
    fn known_dimensions() {
        let (a1, s1) = regular(Series::A, 1);
        let xi = RescaledWeight::new(a1.fundamental_weight(0).scale(&q(5)));
        assert_eq!(quantum_dimension(&a1, &s1, &xi).unwrap(), q(6));
        assert_eq!(freudenthal_dim(&a1, &xi.xi).unwrap(), 6);
        let (a2, s2) = regular(Series::A, 2);
        assert_eq!(quantum_dimension(&a2, &s2, &RescaledWeight::new(a2.rho())).unwrap(), q(8));
        assert_eq!(freudenthal_dim(&a2, &a2.rho()).unwrap(), 8);
        assert_eq!(freudenthal_dim(&a2, &a2.fundamental_weight(0)).unwrap(), 3);
        assert_eq!(quantum_dimension(&a2, &s2, &RescaledWeight::new(Weight::zero(2))).unwrap(), q(1));
        let (g2, _) = regular(Series::G, 2);
        // the short simple root is the first one
        assert_eq!(freudenthal_dim(&g2, &g2.fundamental_weight(0)).unwrap(), 7);
        assert_eq!(freudenthal_dim(&g2, &g2.fundamental_weight(1)).unwrap(), 14);
        assert_eq!(freudenthal_dim(&g2, &Weight::zero(2)).unwrap(), 1);
    }

    #[test]
    fn non_dominant_is_rejected() {
        let (a2, _) = regular(Series::A, 2);
        let bad = a2.fundamental_weight(0).scale(&q(-1));
        assert!(matches!(freudenthal_dim(&a2, &bad), Err(Error::Argument(_))));
        assert!(freudenthal_dim(&a2, &a2.fundamental_weight(0).scale(&qf(1, 2))).is_err());
    }

    #[test]
    fn b2_table_matches() {
        let (b2, s) = regular(Series::B, 2);
        let rows = dimension_table(&b2, &s, 2).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().all(|r| r.matches()));
        let csv = table_csv(2, &rows);
        assert!(csv.starts_with("k1,k2,qdim,freudenthal,match\n0,0,1,1,true\n"));
    }

    #[test]
    fn trace_polynomial_at_unit() {
        let (a2, s) = regular(Series::A, 2);
        let xi = a2.fundamental_weight(1).scale(&q(3));
        let p = trace_polynomial(&a2, &s, &xi).unwrap();
        assert_eq!(p.eval(&q(1)), quantum_dimension(&a2, &s, &RescaledWeight::new(xi)).unwrap());
        // <a1, omega_2> = 0 drops one factor's u term
        assert_eq!(p.degree(), Some(2));
    }

    fn coords(r: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
        proptest::collection::vec((-20i64..20, 1i64..5), r)
    }

    proptest! {
        #[test]
        fn scale_invariant(xs in coords(2), c in 1i64..6, d in 1i64..4) {
            for s in [Series::A, Series::B, Series::G] {
                let (rs, sp) = regular(s, 2);
                let xi = RescaledWeight::new(Weight::new(xs.iter().map(|&(n, m)| qf(n, m)).collect()));
                let scaled = rs.with_form_scale(&qf(c, d));
                prop_assert_eq!(quantum_dimension(&rs, &sp, &xi).unwrap(), quantum_dimension(&scaled, &sp, &xi).unwrap());
            }
        }

        #[test]
        fn polynomial_agrees(points in proptest::collection::vec(coords(2), 8)) {
            for s in [Series::A, Series::B, Series::G] {
                let (rs, sp) = regular(s, 2);
                let poly = quantum_dimension_polynomial(&rs, &sp).unwrap();
                prop_assert_eq!(poly.total_degree(), Some(sp.delta_plus().len() as u32));
                // at least |positive roots| + 2 points for every type here
                for p in points.iter().take(sp.delta_plus().len() + 2) {
                    let x: Vec<Q> = p.iter().map(|&(n, m)| qf(n, m)).collect();
                    let xi = RescaledWeight::new(Weight::new(x.clone()));
                    prop_assert_eq!(poly.eval(&x), quantum_dimension(&rs, &sp, &xi).unwrap());
                }
            }
        }
    }
}
