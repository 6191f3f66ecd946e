use num_traits::{One, Zero};

use crate::arith::{Poly, ScalarQt, Q};
use crate::enveloping::{BasisKind, ChevalleyAlgebra};
use crate::error::{Error, Result};

use super::function::OrbitFunction;

type Matrix = Vec<Vec<Q>>;

/// A group element `prod exp(s_i x_i)` with root vectors `x_i`, stored as
/// its exact adjoint matrix and inverse.
#[derive(Clone, Debug)]
pub struct GroupPoint {
    pub word: Vec<(usize, Q)>,
    ad: Matrix,
    ad_inv: Matrix,
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect()
}

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut c = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    c[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    c
}

/// `exp(s ad x)` for ad-nilpotent `x`; the series terminates.
fn exp_ad(alg: &ChevalleyAlgebra, x: usize, s: &Q) -> Matrix {
    let n = alg.dim();
    let mut nmat = alg.ad_matrix(x);
    for row in nmat.iter_mut() {
        for v in row.iter_mut() {
            *v *= s;
        }
    }
    let mut out = identity(n);
    let mut power = identity(n);
    let mut k = 0i64;
    loop {
        power = matmul(&power, &nmat);
        k += 1;
        if power.iter().flatten().all(|v| v.is_zero()) {
            break;
        }
        let inv_fact = Q::from_integer(k.into()).recip();
        for row in power.iter_mut() {
            for v in row.iter_mut() {
                *v *= &inv_fact;
            }
        }
        for i in 0..n {
            for j in 0..n {
                out[i][j] += &power[i][j];
            }
        }
    }
    out
}

/// Builds the point for a word of `(basis index, parameter)` pairs; only
/// root vectors are allowed.
pub fn group_point(alg: &ChevalleyAlgebra, word: &[(usize, Q)]) -> Result<GroupPoint> {
    let n = alg.dim();
    let mut ad = identity(n);
    let mut ad_inv = identity(n);
    for (b, s) in word {
        if *b >= n || matches!(alg.kind(*b), BasisKind::H(_)) {
            return Err(Error::Argument(format!("group word letter {b} is not a root vector")));
        }
        ad = matmul(&ad, &exp_ad(alg, *b, s));
        ad_inv = matmul(&exp_ad(alg, *b, &-s), &ad_inv);
    }
    let p = GroupPoint { word: word.to_vec(), ad, ad_inv };
    p.check(alg)?;
    Ok(p)
}

impl GroupPoint {
    /// `Ad_g` as a matrix: column `h` holds `Ad_g b_h`.
    pub fn ad_matrix(&self) -> &Matrix {
        &self.ad
    }

    pub fn ad_inverse(&self) -> &Matrix {
        &self.ad_inv
    }

    fn column(m: &Matrix, j: usize) -> Vec<Q> {
        m.iter().map(|row| row[j].clone()).collect()
    }

    /// Checks that `Ad_g` is a Lie algebra automorphism preserving the
    /// Killing form and that the stored inverse is correct.
    pub fn check(&self, alg: &ChevalleyAlgebra) -> Result<()> {
        let n = alg.dim();
        if matmul(&self.ad, &self.ad_inv) != identity(n) {
            return Err(Error::Consistency("group point inverse is wrong".into()));
        }
        let cols: Vec<Vec<Q>> = (0..n).map(|j| GroupPoint::column(&self.ad, j)).collect();
        for a in 0..n {
            for b in 0..n {
                let lhs = alg.bracket(a, b).iter().fold(vec![Q::zero(); n], |mut acc, (k, c)| {
                    for (x, y) in acc.iter_mut().zip(&cols[*k]) {
                        *x += c * y;
                    }
                    acc
                });
                if lhs != alg.bracket_vec(&cols[a], &cols[b]) {
                    return Err(Error::Consistency("group point does not preserve the bracket".into()));
                }
            }
        }
        let k = alg.killing_form();
        for a in 0..n {
            for b in 0..n {
                let mut v = Q::zero();
                for i in 0..n {
                    if cols[a][i].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        if !cols[b][j].is_zero() {
                            v += &cols[a][i] * &k[i][j] * &cols[b][j];
                        }
                    }
                }
                if v != k[a][b] {
                    return Err(Error::Consistency("group point does not preserve the Killing form".into()));
                }
            }
        }
        Ok(())
    }
}

/// Evaluates `f` at `p`: `X[k, h] -> beta_k(Ad_{p^-1} b_h)`.
pub fn evaluate(f: &OrbitFunction, p: &GroupPoint) -> ScalarQt {
    let dim = f.dim();
    let mut num = Poly::zero();
    for (m, poly) in f.num_map() {
        let mut v = Q::one();
        for &id in m {
            let (k, h) = (id as usize / dim, id as usize % dim);
            v *= &p.ad_inv[k][h];
            if v.is_zero() {
                break;
            }
        }
        num.add_scaled(poly, &v);
    }
    ScalarQt::new(num, f.denominator().clone())
}
