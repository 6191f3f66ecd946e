use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::arith::{MPoly, Poly, ScalarQt, Q};
use crate::enveloping::{BasisKind, LeviSplit, Monomial, Uea, UeaElement};
use crate::error::{Error, Result};
use crate::rootsys::DegreeVector;

/// Whether characters are evaluated at `lambda` or at `lambda / t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Plain,
    LambdaOverT,
}

/// The pairing between `U(n-)_mu` and `U(n+)_mu` for one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ShapovalovBlock {
    pub degree: DegreeVector,
    /// PBW monomials of `U(n-)_mu` (f-letters).
    pub rows: Vec<Monomial>,
    /// PBW monomials of `U(n+)_mu` (e-letters).
    pub cols: Vec<Monomial>,
    pub entries: Vec<Vec<ScalarQt>>,
}

impl ShapovalovBlock {
    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

/// Block computations for one split; owns the enveloping algebra whose
/// product cache is shared across degrees.
#[derive(Debug)]
pub struct Shapovalov {
    split: LeviSplit,
    uea: Uea,
}

impl Shapovalov {
    pub fn new(split: LeviSplit) -> Self {
        let uea = Uea::for_split(&split);
        Shapovalov { split, uea }
    }

    pub fn split(&self) -> &LeviSplit {
        &self.split
    }

    pub fn uea(&self) -> &Uea {
        &self.uea
    }

    /// All PBW monomials of `U(n-)` (as f-letters) with height at most
    /// `max_height`, grouped by degree in increasing degree order.
    pub fn monomials_up_to(&self, max_height: u32) -> Vec<(DegreeVector, Vec<Monomial>)> {
        let alg = self.split.algebra();
        let rs = alg.root_system();
        let roots: Vec<(usize, &DegreeVector)> = self.split.delta_plus().iter().map(|&k| (k, &rs.positive_roots()[k])).collect();
        let mut groups: std::collections::BTreeMap<DegreeVector, Vec<Monomial>> = std::collections::BTreeMap::new();
        fn rec(
            roots: &[(usize, &DegreeVector)],
            start: usize,
            cur: &mut Vec<usize>,
            deg: DegreeVector,
            budget: u32,
            out: &mut std::collections::BTreeMap<DegreeVector, Vec<Monomial>>,
        ) {
            out.entry(deg.clone()).or_default().push(cur.iter().map(|&k| k as u8).collect());
            for i in start..roots.len() {
                let h = roots[i].1.height();
                if h <= budget {
                    cur.push(roots[i].0);
                    rec(roots, i, cur, deg.add(roots[i].1), budget - h, out);
                    cur.pop();
                }
            }
        }
        rec(&roots, 0, &mut Vec::new(), DegreeVector::zero(alg.rank()), max_height, &mut groups);
        groups
            .into_iter()
            .map(|(d, ms)| {
                let ms = ms.into_iter().map(|m| m.into_iter().map(|k| alg.f(k as usize) as u8).collect()).collect();
                (d, ms)
            })
            .collect()
    }

    /// PBW monomials of `U(n-)_mu` as f-letters.
    pub fn lowering_basis(&self, mu: &DegreeVector) -> Vec<Monomial> {
        self.monomials_up_to(mu.height())
            .into_iter()
            .find(|(d, _)| d == mu)
            .map(|(_, ms)| ms)
            .unwrap_or_default()
    }

    /// The e-letter counterpart of an f-letter monomial.
    pub fn raising_of(&self, m: &[u8]) -> Monomial {
        let alg = self.split.algebra();
        m.iter()
            .map(|&b| match alg.kind(b as usize) {
                BasisKind::F(k) => alg.e(k) as u8,
                _ => unreachable!("lowering monomial with non-f letter"),
            })
            .collect()
    }

    /// `phi(S(y) x)` in normal form.
    pub fn projected_pairing(&self, x: &[u8], y: &[u8]) -> UeaElement {
        let mut word: Vec<usize> = y.iter().rev().map(|&b| b as usize).collect();
        word.extend(x.iter().map(|&b| b as usize));
        let nf = self.uea.normal_form(&word);
        let p = self.uea.hc_project(&nf);
        if y.len() % 2 == 1 {
            p.scale(&-Q::one())
        } else {
            p
        }
    }

    /// The character on `U(centralizer)`, as a Laurent polynomial: the
    /// coefficient of `t^{-k}` in slot `k`.
    fn character(&self, u: &UeaElement, mode: Mode) -> Vec<Q> {
        let mut by_len: Vec<Q> = Vec::new();
        for (m, c) in u.terms() {
            let mut v = c.clone();
            for &b in m {
                v *= self.split.lambda_on(b as usize);
                if v.is_zero() {
                    break;
                }
            }
            let k = if mode == Mode::LambdaOverT { m.len() } else { 0 };
            if by_len.len() <= k {
                by_len.resize(k + 1, Q::zero());
            }
            by_len[k] += v;
        }
        by_len
    }

    pub fn block(&self, mu: &DegreeVector, mode: Mode) -> ShapovalovBlock {
        let rows = self.lowering_basis(mu);
        let cols: Vec<Monomial> = rows.iter().map(|m| self.raising_of(m)).collect();
        let entries = rows
            .iter()
            .map(|x| {
                cols.iter()
                    .map(|y| {
                        let laurent = self.character(&self.projected_pairing(x, y), mode);
                        let k = laurent.len().saturating_sub(1);
                        // sum_j a_j t^{-j} = (sum_j a_j t^{k-j}) / t^k
                        let num = Poly::from_coeffs(laurent.into_iter().rev().collect());
                        ScalarQt::new(num, Poly::monomial(Q::one(), k))
                    })
                    .collect()
            })
            .collect();
        ShapovalovBlock { degree: mu.clone(), rows, cols, entries }
    }

    /// Block determinant as a polynomial in the coordinates `lambda(h_i)`,
    /// over the unnormalized Chevalley basis (normalization would introduce
    /// denominators in lambda).
    pub fn block_determinant(&self, mu: &DegreeVector, max_size: usize) -> Result<MPoly> {
        let rows = self.lowering_basis(mu);
        if rows.len() > max_size {
            return Err(Error::Argument(format!("block at {mu} has size {} above the symbolic bound {max_size}", rows.len())));
        }
        let base = Shapovalov::new(self.split.unnormalized());
        let rank = self.split.algebra().rank();
        let alg = base.split.algebra();
        let entries: Vec<Vec<MPoly>> = rows
            .iter()
            .map(|x| {
                rows.iter()
                    .map(|xr| {
                        let y = base.raising_of(xr);
                        let p = base.projected_pairing(x, &y);
                        let mut acc = MPoly::zero(rank);
                        for (m, c) in p.terms() {
                            let mut term = MPoly::constant(rank, c.clone());
                            for &b in m {
                                match alg.kind(b as usize) {
                                    BasisKind::H(i) => term = term.mul(&MPoly::var(rank, i)),
                                    _ => {
                                        term = MPoly::zero(rank);
                                        break;
                                    }
                                }
                            }
                            acc = acc.add(&term);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let det = determinant_mpoly(&entries, rank);
        if det.is_zero() {
            return Err(Error::Singular { degree: mu.to_string() });
        }
        Ok(det)
    }
}

/// Determinant by dynamic programming over sets of used columns.
pub fn determinant_mpoly(m: &[Vec<MPoly>], nvars: usize) -> MPoly {
    let n = m.len();
    if n == 0 {
        return MPoly::constant(nvars, Q::one());
    }
    let mut dp: HashMap<u64, MPoly> = HashMap::new();
    dp.insert(0, MPoly::constant(nvars, Q::one()));
    for row in m {
        let mut next: HashMap<u64, MPoly> = HashMap::new();
        for (mask, acc) in &dp {
            for (c, entry) in row.iter().enumerate() {
                if mask & (1 << c) != 0 || entry.is_zero() {
                    continue;
                }
                let inversions = (mask >> (c + 1)).count_ones();
                let mut term = acc.mul(entry);
                if inversions % 2 == 1 {
                    term = term.scale(&-Q::one());
                }
                let slot = next.entry(mask | (1 << c)).or_insert_with(|| MPoly::zero(nvars));
                *slot = slot.add(&term);
            }
        }
        dp = next;
    }
    dp.remove(&((1u64 << n) - 1)).unwrap_or_else(|| MPoly::zero(nvars))
}

/// Exact inverse by fraction-free Gauss-Jordan elimination on the
/// polynomial matrix `t^k P`, where `t^k` clears every denominator.
pub fn invert(p: &[Vec<ScalarQt>], degree: &DegreeVector) -> Result<Vec<Vec<ScalarQt>>> {
    let n = p.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let singular = || Error::Singular { degree: degree.to_string() };
    // common denominator of all entries
    let mut den = Poly::one();
    for row in p {
        for e in row {
            if !e.denom().is_one() {
                let g = Poly::gcd(&den, e.denom());
                den = (&den * e.denom()).exact_div(&g);
            }
        }
    }
    let width = 2 * n;
    let mut a: Vec<Vec<Poly>> = p
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Poly> = row.iter().map(|e| (e.numer() * &den).exact_div(e.denom())).collect();
            r.extend((0..n).map(|j| if i == j { Poly::one() } else { Poly::zero() }));
            r
        })
        .collect();
    let mut prev = Poly::one();
    for k in 0..n {
        let piv = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k].degree())
            .ok_or_else(singular)?;
        a.swap(k, piv);
        for i in 0..n {
            if i == k {
                continue;
            }
            let aik = a[i][k].clone();
            for j in 0..width {
                let v = &(&a[k][k] * &a[i][j]) - &(&aik * &a[k][j]);
                let (q, r) = v.div_rem(&prev);
                if !r.is_zero() {
                    return Err(Error::Consistency("inexact fraction-free division".into()));
                }
                a[i][j] = q;
            }
        }
        prev = a[k][k].clone();
    }
    // rows now read [d_i * I | d_i * (t^k P)^-1] with d_i on the diagonal
    let inv = (0..n)
        .map(|i| (0..n).map(|j| ScalarQt::new(&a[i][n + j] * &den, a[i][i].clone())).collect())
        .collect();
    Ok(inv)
}

/// `A * B` over the rational function field.
pub fn matmul(a: &[Vec<ScalarQt>], b: &[Vec<ScalarQt>]) -> Vec<Vec<ScalarQt>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = ScalarQt::zero();
                    for (k, x) in a[i].iter().enumerate() {
                        if !x.is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(x * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn is_identity(m: &[Vec<ScalarQt>]) -> bool {
    m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, e)| if i == j { e.is_one() } else { e.is_zero() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::enveloping::{centralizer_split, normalize_root_vectors, ChevalleyAlgebra};
    use crate::rootsys::{RootSystem, Series};
    use std::sync::Arc;

    fn shap(s: Series, r: usize, lam: &[i64]) -> Shapovalov {
        let alg = Arc::new(ChevalleyAlgebra::new(&RootSystem::new(s, r).unwrap()).unwrap());
        let vals: Vec<Q> = lam.iter().map(|&x| q(x)).collect();
        Shapovalov::new(normalize_root_vectors(centralizer_split(alg, &vals).unwrap()).unwrap())
    }

    #[test]
    fn degree_zero_block_is_identity() {
        let s = shap(Series::A, 2, &[2, 3]);
        let b = s.block(&DegreeVector::zero(2), Mode::LambdaOverT);
        assert_eq!(b.entries, vec![vec![ScalarQt::one()]]);
    }

    #[test]
    fn sl2_first_block_is_one_over_t() {
        let s = shap(Series::A, 1, &[5]);
        let b = s.block(&DegreeVector::new(vec![1]), Mode::LambdaOverT);
        assert_eq!(b.entries, vec![vec![ScalarQt::t_power(q(1), -1)]]);
        let inv = invert(&b.entries, &b.degree).unwrap();
        assert_eq!(inv, vec![vec![ScalarQt::t()]]);
    }

    #[test]
    fn sl2_determinants_factor() {
        // unnormalized: (-1)^n n! prod_{j<n} (lambda - j)
        let s = shap(Series::A, 1, &[5]);
        for n in 0..5u32 {
            let d = s.block_determinant(&DegreeVector::new(vec![n]), 8).unwrap();
            for lam in 0..8i64 {
                let mut expect = q(if n % 2 == 0 { 1 } else { -1 });
                for j in 0..n as i64 {
                    expect *= q(j + 1) * q(lam - j);
                }
                assert_eq!(d.eval(&[q(lam)]), expect);
            }
        }
    }

    #[test]
    fn sl3_two_by_two_determinant_is_nonzero() {
        let s = shap(Series::A, 2, &[2, 3]);
        let mu = DegreeVector::new(vec![1, 1]);
        assert_eq!(s.lowering_basis(&mu).len(), 2);
        let d = s.block_determinant(&mu, 8).unwrap();
        assert!(d.total_degree() == Some(3));
    }

    #[test]
    fn inverse_blocks_multiply_to_identity() {
        for (ser, r, lam) in [(Series::A, 2, vec![2, 3]), (Series::B, 2, vec![1, 2]), (Series::A, 2, vec![0, 1])] {
            let s = shap(ser, r, &lam);
            for (mu, _) in s.monomials_up_to(4) {
                let b = s.block(&mu, Mode::LambdaOverT);
                let inv = invert(&b.entries, &mu).unwrap();
                assert!(is_identity(&matmul(&b.entries, &inv)), "{mu}");
            }
        }
    }

    #[test]
    fn cross_degree_pairings_vanish() {
        let s = shap(Series::A, 2, &[2, 3]);
        let groups = s.monomials_up_to(3);
        for (d1, xs) in &groups {
            for (d2, ys) in &groups {
                if d1 == d2 {
                    continue;
                }
                for x in xs {
                    for y in ys {
                        let p = s.projected_pairing(x, &s.raising_of(y));
                        assert!(s.character(&p, Mode::Plain).iter().all(|v| v.is_zero()));
                    }
                }
            }
        }
    }
}
