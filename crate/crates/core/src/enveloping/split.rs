use std::sync::Arc;

use num_traits::{One, Zero};

use super::chevalley::{BasisKind, ChevalleyAlgebra};
use crate::arith::{fmt_q, Q};
use crate::error::{Error, Result};
use crate::rootsys::Weight;

/// The decomposition of the roots determined by a character `lambda` of the
/// Cartan subalgebra.
///
/// `delta_plus` holds the (standard positive) roots with `<alpha, lambda> > 0`;
/// the remaining positive roots span the centralizer together with the
/// Cartan subalgebra.
#[derive(Clone, Debug)]
pub struct LeviSplit {
    alg: Arc<ChevalleyAlgebra>,
    base: Arc<ChevalleyAlgebra>,
    lambda_values: Vec<Q>,
    lambda: Weight,
    delta_plus: Vec<usize>,
    levi_roots: Vec<usize>,
    normalized: bool,
}

/// Builds the split for `lambda` given by its values on the simple coroots.
///
/// Only dominant characters are accepted: then the positive half of the split
/// is a subset of the standard positive roots and the PBW ordering of the
/// Chevalley basis can be reused unchanged.
pub fn centralizer_split(alg: Arc<ChevalleyAlgebra>, lambda_values: &[Q]) -> Result<LeviSplit> {
    let rank = alg.rank();
    if lambda_values.len() != rank {
        return Err(Error::DimensionMismatch { expected: rank, got: lambda_values.len() });
    }
    if lambda_values.iter().all(|v| v.is_zero()) {
        return Err(Error::DegenerateOrbit);
    }
    if let Some(i) = lambda_values.iter().position(|v| v < &Q::zero()) {
        return Err(Error::NonDominant { index: i + 1, value: fmt_q(&lambda_values[i]) });
    }
    let rs = alg.root_system();
    let lambda = rs.from_coroot_values(lambda_values)?;
    let mut delta_plus = Vec::new();
    let mut levi_roots = Vec::new();
    for k in 0..alg.num_positive() {
        let v = lambda_on_coroot(&alg, lambda_values, k);
        if v.is_zero() {
            levi_roots.push(k);
        } else {
            debug_assert!(v > Q::zero());
            delta_plus.push(k);
        }
    }
    Ok(LeviSplit { base: alg.clone(), alg, lambda_values: lambda_values.to_vec(), lambda, delta_plus, levi_roots, normalized: false })
}

fn lambda_on_coroot(alg: &ChevalleyAlgebra, lambda_values: &[Q], k: usize) -> Q {
    alg.coroot(k).iter().zip(lambda_values).map(|(c, v)| c * v).sum()
}

/// Rescales every `f_alpha` with `alpha` in the positive half so that
/// `lambda([f_alpha, e_alpha]) = 1`.
pub fn normalize_root_vectors(split: LeviSplit) -> Result<LeviSplit> {
    let alg = &split.alg;
    let mut scales = vec![Q::one(); alg.dim()];
    for &k in &split.delta_plus {
        let v = split.lambda_of_combo(alg.bracket(alg.f(k), alg.e(k)));
        if v.is_zero() {
            return Err(Error::Consistency(format!("lambda([f, e]) vanishes on root {}", k + 1)));
        }
        scales[alg.f(k)] = v.recip();
    }
    let normalized = if scales.iter().all(|s| s.is_one()) { (**alg).clone() } else { alg.rescaled(&scales) };
    let out = LeviSplit { alg: Arc::new(normalized), normalized: true, ..split };
    out.check_pairing()?;
    Ok(out)
}

impl LeviSplit {
    pub fn algebra(&self) -> &ChevalleyAlgebra {
        &self.alg
    }

    pub fn algebra_arc(&self) -> Arc<ChevalleyAlgebra> {
        self.alg.clone()
    }

    /// The Chevalley algebra before normalization, independent of lambda.
    pub fn base_algebra(&self) -> Arc<ChevalleyAlgebra> {
        self.base.clone()
    }

    /// The same split over the unnormalized Chevalley basis.
    pub fn unnormalized(&self) -> LeviSplit {
        LeviSplit { alg: self.base.clone(), normalized: false, ..self.clone() }
    }

    pub fn lambda_values(&self) -> &[Q] {
        &self.lambda_values
    }

    /// `lambda` in simple-root coordinates.
    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn delta_plus(&self) -> &[usize] {
        &self.delta_plus
    }

    pub fn levi_roots(&self) -> &[usize] {
        &self.levi_roots
    }

    pub fn is_regular(&self) -> bool {
        self.levi_roots.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `lambda` on a basis element (zero off the Cartan).
    pub fn lambda_on(&self, b: usize) -> Q {
        match self.alg.kind(b) {
            BasisKind::H(i) => self.lambda_values[i].clone(),
            _ => Q::zero(),
        }
    }

    pub fn lambda_of_combo(&self, c: &[(usize, Q)]) -> Q {
        c.iter().map(|(k, x)| x * self.lambda_on(*k)).sum()
    }

    /// Whether a basis element lies in the centralizer of `lambda`.
    pub fn in_levi(&self, b: usize) -> bool {
        match self.alg.kind(b) {
            BasisKind::H(_) => true,
            BasisKind::E(k) | BasisKind::F(k) => self.levi_roots.contains(&k),
        }
    }

    /// PBW ordering of the basis: negative half, centralizer (f's, h's, e's),
    /// positive half. Returns the basis indices in that order.
    pub fn pbw_order(&self) -> Vec<usize> {
        let a = &self.alg;
        let mut order: Vec<usize> = self.delta_plus.iter().map(|&k| a.f(k)).collect();
        order.extend(self.levi_roots.iter().map(|&k| a.f(k)));
        order.extend((0..a.rank()).map(|i| a.h(i)));
        order.extend(self.levi_roots.iter().map(|&k| a.e(k)));
        order.extend(self.delta_plus.iter().map(|&k| a.e(k)));
        order
    }

    /// Checks `lambda([f_a, e_b]) = delta_ab` on the positive half and that
    /// `lambda` kills brackets inside the centralizer.
    pub fn check_pairing(&self) -> Result<()> {
        let a = &self.alg;
        for &i in &self.delta_plus {
            for &j in &self.delta_plus {
                let v = self.lambda_of_combo(a.bracket(a.f(i), a.e(j)));
                let expect = if i == j && self.normalized { Q::one() } else { v.clone() };
                if (i != j && !v.is_zero()) || v != expect {
                    return Err(Error::Consistency(format!("lambda([f{}, e{}]) = {}", i + 1, j + 1, fmt_q(&v))));
                }
            }
        }
        let levi: Vec<usize> = (0..a.dim()).filter(|&b| self.in_levi(b)).collect();
        for &x in &levi {
            for &y in &levi {
                if !self.lambda_of_combo(a.bracket(x, y)).is_zero() {
                    return Err(Error::Consistency("lambda does not vanish on the derived centralizer".into()));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::rootsys::{RootSystem, Series};

    fn alg(s: Series, r: usize) -> Arc<ChevalleyAlgebra> {
        Arc::new(ChevalleyAlgebra::new(&RootSystem::new(s, r).unwrap()).unwrap())
    }

    #[test]
    fn regular_a2() {
        let sp = centralizer_split(alg(Series::A, 2), &[q(2), q(3)]).unwrap();
        assert_eq!(sp.delta_plus(), &[0, 1, 2]);
        assert!(sp.is_regular());
    }

    #[test]
    fn singular_a2_keeps_first_simple_root_in_centralizer() {
        let sp = centralizer_split(alg(Series::A, 2), &[q(0), q(1)]).unwrap();
        // roots: a1, a2, a1+a2
        assert_eq!(sp.delta_plus(), &[1, 2]);
        assert_eq!(sp.levi_roots(), &[0]);
        let sp = normalize_root_vectors(sp).unwrap();
        sp.check_pairing().unwrap();
        sp.algebra().check_invariants().unwrap();
    }

    #[test]
    fn degenerate_and_non_dominant_rejected() {
        assert!(matches!(centralizer_split(alg(Series::A, 1), &[q(0)]), Err(Error::DegenerateOrbit)));
        assert!(matches!(centralizer_split(alg(Series::A, 2), &[q(1), q(-1)]), Err(Error::NonDominant { index: 2, .. })));
    }

    #[test]
    fn sl2_normalization_scales_f() {
        let a = alg(Series::A, 1);
        let sp = normalize_root_vectors(centralizer_split(a, &[q(3)]).unwrap()).unwrap();
        let al = sp.algebra();
        // f' = -f/3, [f', e] = h/3 so lambda([f', e]) = 1
        assert_eq!(al.bracket(al.f(0), al.e(0)), &vec![(al.h(0), crate::arith::qf(1, 3))]);
        assert_eq!(sp.lambda_of_combo(al.bracket(al.f(0), al.e(0))), q(1));
        // idempotent
        let again = normalize_root_vectors(sp.clone()).unwrap();
        assert_eq!(again.algebra().bracket(al.f(0), al.e(0)), al.bracket(al.f(0), al.e(0)));
    }

    #[test]
    fn normalization_for_all_supported_types() {
        for (s, r) in [(Series::B, 2), (Series::C, 3), (Series::G, 2), (Series::D, 4)] {
            let a = alg(s, r);
            let vals: Vec<Q> = (0..r).map(|i| q(i as i64 + 1)).collect();
            let sp = normalize_root_vectors(centralizer_split(a, &vals).unwrap()).unwrap();
            sp.algebra().check_invariants().unwrap();
        }
    }
}
