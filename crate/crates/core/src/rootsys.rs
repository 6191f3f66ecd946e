//! Finite root systems from Cartan data.
//!
//! All coordinates live in the basis of simple roots. The invariant form is
//! normalized so that long roots have squared length 2.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{as_integer, fmt_q, q, qf, solve, Q};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

impl FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Series::A),
            "B" => Ok(Series::B),
            "C" => Ok(Series::C),
            "D" => Ok(Series::D),
            "E" => Ok(Series::E),
            "F" => Ok(Series::F),
            "G" => Ok(Series::G),
            other => Err(Error::Argument(format!("unknown series {other:?}"))),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Nonnegative element of the root lattice, in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DegreeVector(Vec<u32>);

impl DegreeVector {
    pub fn new(coeffs: Vec<u32>) -> Self {
        DegreeVector(coeffs)
    }

    pub fn zero(rank: usize) -> Self {
        DegreeVector(vec![0; rank])
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        DegreeVector(v)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn height(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &DegreeVector) -> DegreeVector {
        DegreeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` if it stays nonnegative.
    pub fn checked_sub(&self, other: &DegreeVector) -> Option<DegreeVector> {
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(DegreeVector)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DegreeVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn to_weight(&self) -> Weight {
        Weight::new(self.0.iter().map(|&c| q(c as i64)).collect())
    }

    /// Sort key: height first, then coordinates in decreasing lexicographic
    /// order (so `a_1` precedes `a_2`).
    pub fn order_key(&self) -> (u32, std::cmp::Reverse<Vec<u32>>) {
        (self.height(), std::cmp::Reverse(self.0.clone()))
    }
}

impl PartialOrd for DegreeVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DegreeVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for DegreeVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|c| c.to_string()))
    }
}

/// Rational weight in simple-root coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Weight {
    coords: Vec<Q>,
}

impl Weight {
    pub fn new(coords: Vec<Q>) -> Self {
        Weight { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Weight { coords: vec![Q::zero(); rank] }
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, c: &Q) -> Weight {
        Weight::new(self.coords.iter().map(|x| x * c).collect())
    }

    pub fn height(&self) -> Q {
        self.coords.iter().fold(Q::zero(), |acc, c| acc + c)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(fmt_q).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords.iter().map(fmt_q))
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    series: Series,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    form: Vec<Vec<Q>>,
    positive_roots: Vec<DegreeVector>,
}

fn cartan_matrix(series: Series, rank: usize) -> Result<Vec<Vec<i64>>> {
    let unsupported = Err(Error::UnsupportedType { series: series.letter(), rank });
    let valid = match series {
        Series::A => rank >= 1,
        Series::B | Series::C => rank >= 2,
        Series::D => rank >= 4,
        Series::E => (6..=8).contains(&rank),
        Series::F => rank == 4,
        Series::G => rank == 2,
    };
    if !valid {
        return unsupported;
    }
    let mut c = vec![vec![0i64; rank]; rank];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let link = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match series {
        Series::A => (0..rank - 1).for_each(|i| link(&mut c, i, i + 1)),
        Series::B => {
            (0..rank - 1).for_each(|i| link(&mut c, i, i + 1));
            // alpha_n short
            c[rank - 2][rank - 1] = -2;
        }
        Series::C => {
            (0..rank - 1).for_each(|i| link(&mut c, i, i + 1));
            // alpha_n long
            c[rank - 1][rank - 2] = -2;
        }
        Series::D => {
            (0..rank - 2).for_each(|i| link(&mut c, i, i + 1));
            link(&mut c, rank - 3, rank - 1);
        }
        Series::E => {
            // Bourbaki labels: 1-3-4-5-6(-7(-8)), 2 attached to 4
            link(&mut c, 0, 2);
            link(&mut c, 1, 3);
            (2..rank - 1).for_each(|i| link(&mut c, i, i + 1));
        }
        Series::F => {
            link(&mut c, 0, 1);
            link(&mut c, 1, 2);
            link(&mut c, 2, 3);
            c[1][2] = -2;
        }
        Series::G => {
            // alpha_1 short, alpha_2 long
            c[0][1] = -1;
            c[1][0] = -3;
        }
    }
    Ok(c)
}

/// Dimension of the simple Lie algebra of the given type.
pub fn algebra_dimension(series: Series, rank: usize) -> usize {
    let n = rank;
    match series {
        Series::A => n * (n + 2),
        Series::B | Series::C => n * (2 * n + 1),
        Series::D => n * (2 * n - 1),
        Series::E => match n {
            6 => 78,
            7 => 133,
            _ => 248,
        },
        Series::F => 52,
        Series::G => 14,
    }
}

impl RootSystem {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(series, rank)?;
        // symmetrizer: cartan[i][j] * d_j = cartan[j][i] * d_i, d_j = <a_j,a_j>/2
        let mut d: Vec<Option<Q>> = vec![None; rank];
        d[0] = Some(Q::one());
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for j in 0..rank {
                if j != i && cartan[i][j] != 0 && d[j].is_none() {
                    let di = d[i].clone().unwrap();
                    d[j] = Some(di * q(cartan[j][i]) / q(cartan[i][j]));
                    queue.push_back(j);
                }
            }
        }
        let d: Vec<Q> = d.into_iter().map(|x| x.expect("Dynkin diagram is connected")).collect();
        let max = d.iter().max().unwrap().clone();
        let d: Vec<Q> = d.into_iter().map(|x| x / &max).collect();
        let form: Vec<Vec<Q>> =
            (0..rank).map(|i| (0..rank).map(|j| q(cartan[i][j]) * &d[j]).collect()).collect();
        let mut rs = RootSystem { series, rank, cartan, form, positive_roots: Vec::new() };
        rs.positive_roots = rs.enumerate_positive_roots();
        rs.check()?;
        Ok(rs)
    }

    fn enumerate_positive_roots(&self) -> Vec<DegreeVector> {
        const HEIGHT_BOUND: i64 = 64;
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut work: VecDeque<Vec<i64>> = VecDeque::new();
        for i in 0..self.rank {
            let mut v = vec![0i64; self.rank];
            v[i] = 1;
            seen.insert(v.clone());
            work.push_back(v);
        }
        while let Some(beta) = work.pop_front() {
            for i in 0..self.rank {
                let pairing: i64 = (0..self.rank).map(|j| beta[j] * self.cartan[j][i]).sum();
                if pairing == 0 {
                    continue;
                }
                let mut image = beta.clone();
                image[i] -= pairing;
                let height: i64 = image.iter().sum();
                if image.iter().all(|&c| c >= 0) && height > 0 && height <= HEIGHT_BOUND && seen.insert(image.clone()) {
                    work.push_back(image);
                }
            }
        }
        let mut roots: Vec<DegreeVector> =
            seen.into_iter().map(|v| DegreeVector(v.into_iter().map(|c| c as u32).collect())).collect();
        roots.sort();
        roots
    }

    fn check(&self) -> Result<()> {
        let expected = (algebra_dimension(self.series, self.rank) - self.rank) / 2;
        if self.positive_roots.len() != expected {
            return Err(Error::Consistency(format!(
                "{}{} has {} positive roots, expected {expected}",
                self.series,
                self.rank,
                self.positive_roots.len()
            )));
        }
        for i in 0..self.rank {
            for j in 0..self.rank {
                if self.form[i][j] != self.form[j][i] {
                    return Err(Error::Consistency("invariant form is not symmetric".into()));
                }
                let c = q(2) * &self.form[i][j] / &self.form[j][j];
                if c != q(self.cartan[i][j]) {
                    return Err(Error::Consistency("Cartan matrix does not match the form".into()));
                }
            }
        }
        Ok(())
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.series, self.rank)
    }

    /// `cartan[i][j] = 2<a_i, a_j> / <a_j, a_j>`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn form_matrix(&self) -> &[Vec<Q>] {
        &self.form
    }

    pub fn positive_roots(&self) -> &[DegreeVector] {
        &self.positive_roots
    }

    pub fn simple_roots(&self) -> Vec<DegreeVector> {
        (0..self.rank).map(|i| DegreeVector::simple(self.rank, i)).collect()
    }

    pub fn is_positive_root(&self, v: &DegreeVector) -> bool {
        self.positive_roots.binary_search(v).is_ok()
    }

    pub fn root_index(&self, v: &DegreeVector) -> Option<usize> {
        self.positive_roots.binary_search(v).ok()
    }

    pub fn highest_root(&self) -> &DegreeVector {
        self.positive_roots.last().unwrap()
    }

    /// Same root system with the invariant form multiplied by `c > 0`.
    pub fn with_form_scale(&self, c: &Q) -> RootSystem {
        let mut rs = self.clone();
        for row in rs.form.iter_mut() {
            for x in row.iter_mut() {
                *x *= c;
            }
        }
        rs
    }

    fn check_rank(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: w.rank() });
        }
        Ok(())
    }

    pub fn pairing(&self, u: &Weight, v: &Weight) -> Result<Q> {
        self.check_rank(u)?;
        self.check_rank(v)?;
        let mut acc = Q::zero();
        for (i, ui) in u.coords.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.coords.iter().enumerate() {
                acc += ui * &self.form[i][j] * vj;
            }
        }
        Ok(acc)
    }

    /// `<u, v>` for weights already known to have matching rank.
    pub(crate) fn pair(&self, u: &Weight, v: &Weight) -> Q {
        self.pairing(u, v).expect("rank checked by caller")
    }

    pub fn rho(&self) -> Weight {
        half_sum(self.rank, &self.positive_roots)
    }

    pub fn simple_reflection(&self, i: usize, w: &Weight) -> Weight {
        let ai = DegreeVector::simple(self.rank, i).to_weight();
        let c = q(2) * self.pair(w, &ai) / &self.form[i][i];
        w.sub(&ai.scale(&c))
    }

    /// Values `2<w, a_i>/<a_i, a_i>`, i.e. `w(h_i)` on simple coroots.
    pub fn coroot_values(&self, w: &Weight) -> Result<Vec<Q>> {
        self.check_rank(w)?;
        Ok((0..self.rank)
            .map(|i| q(2) * self.pair(w, &DegreeVector::simple(self.rank, i).to_weight()) / &self.form[i][i])
            .collect())
    }

    /// Weight whose values on the simple coroots are `values`.
    pub fn from_coroot_values(&self, values: &[Q]) -> Result<Weight> {
        if values.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: values.len() });
        }
        // sum_k x_k * 2<a_k,a_i>/<a_i,a_i> = values_i, i.e. cartan^T x = values
        let a: Vec<Vec<Q>> = (0..self.rank).map(|i| (0..self.rank).map(|k| q(self.cartan[k][i])).collect()).collect();
        let x = solve(&a, values).ok_or_else(|| Error::Consistency("singular Cartan matrix".into()))?;
        Ok(Weight::new(x))
    }

    pub fn fundamental_weight(&self, i: usize) -> Weight {
        let mut v = vec![Q::zero(); self.rank];
        v[i] = Q::one();
        self.from_coroot_values(&v).unwrap()
    }

    /// Dominant integral check via `2<mu,a_i>/<a_i,a_i>` in the nonnegative integers.
    pub fn is_dominant_integral(&self, w: &Weight) -> Result<bool> {
        Ok(self.coroot_values(w)?.iter().all(|v| as_integer(v).is_some_and(|n| n >= 0.into())))
    }

    /// Smallest number of positive roots summing to `mu` (`None` if not a
    /// nonnegative combination).
    pub fn min_root_partition_length(&self, mu: &DegreeVector) -> Option<u32> {
        let mut best: std::collections::HashMap<DegreeVector, Option<u32>> = Default::default();
        fn go(rs: &RootSystem, mu: &DegreeVector, memo: &mut std::collections::HashMap<DegreeVector, Option<u32>>) -> Option<u32> {
            if mu.is_zero() {
                return Some(0);
            }
            if let Some(v) = memo.get(mu) {
                return *v;
            }
            let mut out: Option<u32> = None;
            for r in rs.positive_roots() {
                if let Some(rest) = mu.checked_sub(r) {
                    if let Some(k) = go(rs, &rest, memo) {
                        out = Some(out.map_or(k + 1, |o: u32| o.min(k + 1)));
                    }
                }
            }
            memo.insert(mu.clone(), out);
            out
        }
        go(self, mu, &mut best)
    }
}

pub(crate) fn half_sum(rank: usize, roots: &[DegreeVector]) -> Weight {
    let mut acc = Weight::zero(rank);
    for r in roots {
        acc = acc.add(&r.to_weight());
    }
    acc.scale(&qf(1, 2))
}

/// Convenience constructor.
pub fn build_root_system(series: Series, rank: usize) -> Result<RootSystem> {
    RootSystem::new(series, rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dv(c: &[u32]) -> DegreeVector {
        DegreeVector::new(c.to_vec())
    }

    #[test]
    fn small_systems() {
        let a1 = RootSystem::new(Series::A, 1).unwrap();
        assert_eq!(a1.positive_roots(), &[dv(&[1])]);
        let a2 = RootSystem::new(Series::A, 2).unwrap();
        assert_eq!(a2.positive_roots(), &[dv(&[1, 0]), dv(&[0, 1]), dv(&[1, 1])]);
        let g2 = RootSystem::new(Series::G, 2).unwrap();
        assert_eq!(g2.positive_roots().len(), 6);
        assert_eq!(g2.highest_root().height(), 5);
        assert_eq!(g2.highest_root(), &dv(&[3, 2]));
        let b2 = RootSystem::new(Series::B, 2).unwrap();
        assert_eq!(b2.positive_roots(), &[dv(&[1, 0]), dv(&[0, 1]), dv(&[1, 1]), dv(&[1, 2])]);
    }

    #[test]
    fn every_supported_type_builds() {
        for (s, r) in [
            (Series::A, 5),
            (Series::B, 4),
            (Series::C, 3),
            (Series::D, 4),
            (Series::D, 5),
            (Series::E, 6),
            (Series::E, 7),
            (Series::E, 8),
            (Series::F, 4),
        ] {
            let rs = RootSystem::new(s, r).unwrap();
            assert_eq!(rs.positive_roots().len(), (algebra_dimension(s, r) - r) / 2);
        }
        assert!(matches!(RootSystem::new(Series::G, 3), Err(Error::UnsupportedType { .. })));
        assert!(RootSystem::new(Series::D, 3).is_err());
        assert!(RootSystem::new(Series::A, 0).is_err());
    }

    #[test]
    fn pairing_values() {
        let a2 = RootSystem::new(Series::A, 2).unwrap();
        let a1w = DegreeVector::simple(2, 0).to_weight();
        let a2w = DegreeVector::simple(2, 1).to_weight();
        assert_eq!(a2.pairing(&a1w, &a1w).unwrap(), q(2));
        assert_eq!(a2.pairing(&a1w, &a2w).unwrap(), q(-1));
        assert!(matches!(a2.pairing(&a1w, &Weight::zero(3)), Err(Error::DimensionMismatch { .. })));

        let g2 = RootSystem::new(Series::G, 2).unwrap();
        let s = DegreeVector::simple(2, 0).to_weight();
        let l = DegreeVector::simple(2, 1).to_weight();
        assert_eq!(g2.pairing(&s, &s).unwrap() / g2.pairing(&l, &l).unwrap(), qf(1, 3));
        assert_eq!(g2.pairing(&l, &l).unwrap(), q(2));
    }

    #[test]
    fn rho_values() {
        let a1 = RootSystem::new(Series::A, 1).unwrap();
        assert_eq!(a1.rho(), Weight::new(vec![qf(1, 2)]));
        let a2 = RootSystem::new(Series::A, 2).unwrap();
        assert_eq!(a2.rho(), Weight::new(vec![q(1), q(1)]));
        // B2: (1,0)+(0,1)+(1,1)+(1,2) = (3,4), half is (3/2, 2)
        let b2 = RootSystem::new(Series::B, 2).unwrap();
        assert_eq!(b2.rho(), Weight::new(vec![qf(3, 2), q(2)]));
    }

    #[test]
    fn rho_is_sum_of_fundamental_weights() {
        for (s, r) in [(Series::A, 3), (Series::B, 3), (Series::C, 3), (Series::G, 2), (Series::F, 4), (Series::D, 4)] {
            let rs = RootSystem::new(s, r).unwrap();
            assert!(rs.coroot_values(&rs.rho()).unwrap().iter().all(|v| v == &q(1)));
        }
    }

    #[test]
    fn closure_under_addition() {
        for (s, r) in [(Series::A, 4), (Series::B, 3), (Series::C, 4), (Series::G, 2), (Series::F, 4)] {
            let rs = RootSystem::new(s, r).unwrap();
            // <a,b> < 0 forces a + b to be a root
            for a in rs.positive_roots() {
                for b in rs.positive_roots() {
                    if a != b && rs.pair(&a.to_weight(), &b.to_weight()) < Q::zero() {
                        assert!(rs.is_positive_root(&a.add(b)), "{a} + {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn fundamental_weights_are_dual() {
        let b3 = RootSystem::new(Series::B, 3).unwrap();
        for i in 0..3 {
            let w = b3.fundamental_weight(i);
            let vals = b3.coroot_values(&w).unwrap();
            for (j, v) in vals.iter().enumerate() {
                assert_eq!(v, &q((i == j) as i64));
            }
        }
        assert!(b3.is_dominant_integral(&b3.rho()).unwrap());
        assert!(!b3.is_dominant_integral(&b3.rho().scale(&qf(1, 2))).unwrap());
    }

    #[test]
    fn min_partition_length() {
        let a2 = RootSystem::new(Series::A, 2).unwrap();
        assert_eq!(a2.min_root_partition_length(&dv(&[1, 1])), Some(1));
        assert_eq!(a2.min_root_partition_length(&dv(&[2, 1])), Some(2));
        assert_eq!(a2.min_root_partition_length(&dv(&[0, 0])), Some(0));
    }

    fn rational() -> impl Strategy<Value = Q> {
        (-20i64..20, 1i64..6).prop_map(|(n, d)| qf(n, d))
    }

    proptest! {
        #[test]
        fn pairing_is_weyl_invariant(
            u in prop::collection::vec(rational(), 2),
            v in prop::collection::vec(rational(), 2),
            which in 0usize..3,
            i in 0usize..2,
        ) {
            let rs = [RootSystem::new(Series::A, 2), RootSystem::new(Series::B, 2), RootSystem::new(Series::G, 2)]
                .into_iter().nth(which).unwrap().unwrap();
            let (u, v) = (Weight::new(u), Weight::new(v));
            let lhs = rs.pairing(&rs.simple_reflection(i, &u), &rs.simple_reflection(i, &v)).unwrap();
            prop_assert_eq!(lhs, rs.pairing(&u, &v).unwrap());
            prop_assert_eq!(rs.pairing(&u, &v).unwrap(), rs.pairing(&v, &u).unwrap());
        }
    }
}
