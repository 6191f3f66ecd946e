use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use super::block::{invert, is_identity, matmul, Mode, Shapovalov};
use super::cache::BlockCache;
use crate::arith::{fmt_q, Poly, ScalarQt, Q};
use crate::enveloping::{ChevalleyAlgebra, LeviSplit, Monomial};
use crate::error::{Error, Result};
use crate::rootsys::DegreeVector;

/// One degree of `B`: `sum_ij coeffs[i][j] * rows[i] (x) cols[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BBlock {
    pub degree: DegreeVector,
    pub rows: Vec<Monomial>,
    pub cols: Vec<Monomial>,
    /// The pairing block at `lambda / t`.
    pub pairing: Vec<Vec<ScalarQt>>,
    /// `coeffs[i][j] = (P^-1)[j][i]`.
    pub coeffs: Vec<Vec<ScalarQt>>,
}

impl BBlock {
    /// Lowest power of `t` among the coefficients.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().flatten().filter_map(|c| c.valuation()).min()
    }

    /// Fewest roots of the positive half summing to the degree.
    pub fn min_parts(&self) -> usize {
        self.rows.iter().map(|m| m.len()).min().unwrap_or(0)
    }
}

/// The element `B`, truncated to degrees of height at most `height_cutoff`.
#[derive(Clone, Debug)]
pub struct TwoTensor {
    split: LeviSplit,
    blocks: Vec<BBlock>,
    height_cutoff: u32,
}

/// Computes `B` for a normalized split, with all degrees up to the cutoff.
pub fn compute_b(split: &LeviSplit, height_cutoff: u32) -> Result<TwoTensor> {
    Shapovalov::new(split.clone()).compute_b(height_cutoff, None)
}

impl Shapovalov {
    pub fn b_block(&self, mu: &DegreeVector) -> Result<BBlock> {
        let blk = self.block(mu, Mode::LambdaOverT);
        let inv = invert(&blk.entries, mu)?;
        if !is_identity(&matmul(&blk.entries, &inv)) {
            return Err(Error::Consistency(format!("inverse check failed at degree {mu}")));
        }
        let n = blk.size();
        let coeffs = (0..n).map(|i| (0..n).map(|j| inv[j][i].clone()).collect()).collect();
        Ok(BBlock { degree: blk.degree, rows: blk.rows, cols: blk.cols, pairing: blk.entries, coeffs })
    }

    pub fn compute_b(&self, height_cutoff: u32, cache: Option<&BlockCache>) -> Result<TwoTensor> {
        if !self.split().is_normalized() {
            return Err(Error::Argument("B requires a normalized split".into()));
        }
        let degrees: Vec<DegreeVector> = self.monomials_up_to(height_cutoff).into_iter().map(|(d, _)| d).collect();
        let mut blocks = Vec::with_capacity(degrees.len());
        for mu in degrees {
            let blk = match cache {
                Some(c) => c.get_or_compute(self, &mu)?,
                None => self.b_block(&mu)?,
            };
            blocks.push(blk);
        }
        blocks.sort_by(|a, b| a.degree.cmp(&b.degree));
        Ok(TwoTensor { split: self.split().clone(), blocks, height_cutoff })
    }
}

/// One line of the leading-order table.
#[derive(Clone, Debug, Serialize)]
pub struct LeadingOrder {
    pub degree: DegreeVector,
    pub height: u32,
    pub min_parts: usize,
    pub valuation: Option<i64>,
}

impl LeadingOrder {
    /// The inverse block starts exactly at `t^{min_parts}`.
    pub fn partition_law(&self) -> bool {
        self.valuation == Some(self.min_parts as i64)
    }

    pub fn height_law(&self) -> bool {
        self.valuation == Some(self.height as i64)
    }
}

/// Coefficients of one power of `t` in the expansion of `B`.
#[derive(Clone, Debug)]
pub struct SeriesOrder {
    pub power: usize,
    /// Whether the cutoff includes every degree that can reach this order.
    pub complete: bool,
    pub terms: Vec<(Monomial, Monomial, Q)>,
}

#[derive(Clone, Debug)]
pub struct BSeries {
    names: Vec<String>,
    pub orders: Vec<SeriesOrder>,
}

impl TwoTensor {
    pub fn split(&self) -> &LeviSplit {
        &self.split
    }

    pub fn algebra(&self) -> &ChevalleyAlgebra {
        self.split.algebra()
    }

    pub fn blocks(&self) -> &[BBlock] {
        &self.blocks
    }

    pub fn height_cutoff(&self) -> u32 {
        self.height_cutoff
    }

    pub fn block(&self, mu: &DegreeVector) -> Option<&BBlock> {
        self.blocks.iter().find(|b| &b.degree == mu)
    }

    /// Largest height among the roots of the positive half.
    pub fn max_root_height(&self) -> u32 {
        let rs = self.algebra().root_system();
        self.split.delta_plus().iter().map(|&k| rs.positive_roots()[k].height()).max().unwrap_or(1)
    }

    /// Highest `t`-order whose coefficient is fully determined by the
    /// included degrees: the inverse block at `mu` starts at `t^m` with `m`
    /// the fewest roots summing to `mu`, and such a `mu` has height at most
    /// `m` times the largest root height.
    pub fn complete_orders(&self) -> u32 {
        self.height_cutoff / self.max_root_height()
    }

    pub fn leading_orders(&self) -> Vec<LeadingOrder> {
        self.blocks
            .iter()
            .map(|b| LeadingOrder { degree: b.degree.clone(), height: b.degree.height(), min_parts: b.min_parts(), valuation: b.valuation() })
            .collect()
    }

    /// Returns a copy in which the coefficient of `t` in every entry is
    /// multiplied by `factor`; used to check that suites detect a wrong `B`.
    pub fn with_scaled_t_coefficient(&self, factor: &Q) -> Result<TwoTensor> {
        let mut out = self.clone();
        let delta = factor - Q::one();
        for b in &mut out.blocks {
            for row in &mut b.coeffs {
                for c in row.iter_mut() {
                    let s = c.series(1)?;
                    if !s[1].is_zero() {
                        *c = &*c + &ScalarQt::from_poly(Poly::monomial(&s[1] * &delta, 1));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Truncated `t`-expansion of `B` through `t^order`.
    pub fn b_series(&self, order: usize) -> Result<BSeries> {
        let mut orders: Vec<SeriesOrder> = (0..=order)
            .map(|k| SeriesOrder { power: k, complete: k as u32 <= self.complete_orders(), terms: Vec::new() })
            .collect();
        for b in &self.blocks {
            for (i, x) in b.rows.iter().enumerate() {
                for (j, y) in b.cols.iter().enumerate() {
                    let c = &b.coeffs[i][j];
                    if c.is_zero() {
                        continue;
                    }
                    let s = c.series(order)?;
                    for (k, v) in s.into_iter().enumerate() {
                        if !v.is_zero() {
                            orders[k].terms.push((x.clone(), y.clone(), v));
                        }
                    }
                }
            }
        }
        let names = (0..self.algebra().dim()).map(|b| self.algebra().basis_name(b)).collect();
        Ok(BSeries { names, orders })
    }

    /// Applies `B` to `nu (x) lambda` and compares with
    /// `nu (x) lambda + sign * t * sum_alpha f_alpha nu (x) e_alpha . lambda`
    /// in `U(n-) (x) g*`, one record per degree.
    pub fn momentum_identity_residuals(&self, sign: i64) -> Vec<(DegreeVector, Vec<ScalarQt>)> {
        let alg = self.algebra();
        let dim = alg.dim();
        let lambda: Vec<Q> = (0..dim).map(|b| self.split.lambda_on(b)).collect();
        let act = |y: &[u8]| -> Vec<Q> {
            let mut v = lambda.clone();
            for &b in y.iter().rev() {
                v = alg.coadjoint(b as usize, &v);
            }
            v
        };
        let mut out = Vec::new();
        for b in &self.blocks {
            let ys: Vec<Vec<Q>> = b.cols.iter().map(|y| act(y)).collect();
            let mut residual = vec![ScalarQt::zero(); dim];
            for (i, x) in b.rows.iter().enumerate() {
                let mut v = vec![ScalarQt::zero(); dim];
                for (j, y) in ys.iter().enumerate() {
                    let c = &b.coeffs[i][j];
                    if c.is_zero() {
                        continue;
                    }
                    for (m, ym) in y.iter().enumerate() {
                        if !ym.is_zero() {
                            v[m] = &v[m] + &c.scale(ym);
                        }
                    }
                }
                let expected: Vec<ScalarQt> = match x.len() {
                    0 => lambda.iter().map(|c| ScalarQt::from_q(c.clone())).collect(),
                    1 => act(&[b.cols[i][0]]).into_iter().map(|c| ScalarQt::t_power(c * Q::from_integer(sign.into()), 1)).collect(),
                    _ => vec![ScalarQt::zero(); dim],
                };
                for m in 0..dim {
                    let d = &v[m] - &expected[m];
                    if !d.is_zero() && residual[m].is_zero() {
                        residual[m] = d;
                    }
                }
            }
            out.push((b.degree.clone(), residual));
        }
        out
    }

    /// The module form of the composition identity, with the sign that
    /// matches `B = 1 + t sum f_alpha (x) e_alpha + ...`.
    pub fn momentum_identity_check(&self) -> Vec<MomentumRecord> {
        self.momentum_identity_residuals(1)
            .into_iter()
            .map(|(degree, res)| {
                let first = res.iter().find(|c| !c.is_zero());
                MomentumRecord {
                    pass: first.is_none(),
                    residual: first.map_or_else(|| "0".to_string(), |c| c.to_string()),
                    degree,
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentumRecord {
    pub degree: DegreeVector,
    pub residual: String,
    pub pass: bool,
}

impl BSeries {
    fn word(&self, m: &[u8]) -> String {
        if m.is_empty() {
            "1".into()
        } else {
            m.iter().map(|&b| self.names[b as usize].as_str()).collect::<Vec<_>>().join("*")
        }
    }

    /// Terms of one order rendered as `c * x (x) y`, in a fixed order.
    pub fn render_order(&self, k: usize) -> Vec<String> {
        self.orders[k]
            .terms
            .iter()
            .map(|(x, y, c)| {
                if c.is_one() {
                    format!("{} ⊗ {}", self.word(x), self.word(y))
                } else {
                    format!("{} * {} ⊗ {}", fmt_q(c), self.word(x), self.word(y))
                }
            })
            .collect()
    }
}

impl fmt::Display for BSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.orders {
            let mark = if o.complete { "" } else { " (incomplete: raise the cutoff)" };
            writeln!(f, "t^{}{}:", o.power, mark)?;
            let terms = self.render_order(o.power);
            if terms.is_empty() {
                writeln!(f, "  0")?;
            }
            for t in terms {
                writeln!(f, "  {t}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::enveloping::{centralizer_split, normalize_root_vectors};
    use crate::rootsys::{RootSystem, Series};
    use std::sync::Arc;

    fn split(s: Series, r: usize, lam: &[i64]) -> LeviSplit {
        let alg = Arc::new(ChevalleyAlgebra::new(&RootSystem::new(s, r).unwrap()).unwrap());
        let vals: Vec<Q> = lam.iter().map(|&x| q(x)).collect();
        normalize_root_vectors(centralizer_split(alg, &vals).unwrap()).unwrap()
    }

    #[test]
    fn sl2_b_terms() {
        let b = compute_b(&split(Series::A, 1, &[5]), 3).unwrap();
        assert_eq!(b.blocks().len(), 4);
        let s = b.b_series(1).unwrap();
        assert_eq!(s.render_order(0), vec!["1 ⊗ 1"]);
        assert_eq!(s.render_order(1), vec!["f1 ⊗ e1"]);
        // every coefficient is the reciprocal of its 1x1 pairing block
        for blk in b.blocks() {
            assert_eq!(&blk.coeffs[0][0] * &blk.pairing[0][0], ScalarQt::one());
        }
    }

    #[test]
    fn sl3_first_order_has_three_terms() {
        let b = compute_b(&split(Series::A, 2, &[2, 3]), 2).unwrap();
        let s = b.b_series(1).unwrap();
        assert_eq!(s.render_order(1), vec!["f1 ⊗ e1", "f2 ⊗ e2", "f3 ⊗ e3"]);
        assert!(s.orders[1].complete);
    }

    #[test]
    fn leading_orders_follow_root_partitions() {
        for (ser, r, lam) in [(Series::A, 1, vec![5]), (Series::A, 2, vec![2, 3]), (Series::B, 2, vec![1, 2])] {
            let b = compute_b(&split(ser, r, &lam), 4).unwrap();
            for lo in b.leading_orders() {
                assert!(lo.partition_law(), "{lo:?}");
            }
        }
    }

    #[test]
    fn momentum_identity_holds_and_detects_faults() {
        for (ser, r, lam) in [(Series::A, 1, vec![5]), (Series::A, 2, vec![2, 3]), (Series::A, 2, vec![0, 1])] {
            let b = compute_b(&split(ser, r, &lam), 3).unwrap();
            assert!(b.momentum_identity_check().iter().all(|r| r.pass), "{ser:?}{r}");
            let bad = b.with_scaled_t_coefficient(&q(2)).unwrap();
            assert!(bad.momentum_identity_check().iter().any(|r| !r.pass));
        }
    }
}
