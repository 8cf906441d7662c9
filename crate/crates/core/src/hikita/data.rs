//! Hypertoric data `1 -> K -> G_m^n -> T -> 1` and its circuits.

use crate::error::{Error, Result};
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

/// Integer `n x r` matrix whose columns span `Lie K` inside `Z^n`, with optional
/// character weights `r_i` used by the dressed Coulomb generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypertoricData {
    matrix: Vec<Vec<i64>>,
    weights: Vec<u32>,
}

/// A circuit: minimal support of a vector in the column span.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Circuit {
    /// Support, 0-based and increasing.
    pub support: Vec<usize>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    /// Primitive dependence vector in `Z^n`, first nonzero entry positive.
    pub vector: Vec<i64>,
    /// Coordinates `c` with `vector = A c`: the exponent of `z`.
    pub class: Vec<i64>,
}

impl HypertoricData {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 {
            return Err(Error::Degenerate("matrix has no rows".into()));
        }
        let r = matrix[0].len();
        if r == 0 || matrix.iter().any(|row| row.len() != r) {
            return Err(Error::Degenerate("rows must be nonempty and of equal length".into()));
        }
        let q: Vec<Vec<BigRational>> = matrix.iter().map(|row| row.iter().map(|&v| rat(v)).collect()).collect();
        if rank(&q) != r {
            return Err(Error::Degenerate(format!("matrix does not have full column rank {r}")));
        }
        Ok(HypertoricData { matrix, weights: vec![1; n] })
    }

    pub fn with_weights(mut self, weights: Vec<u32>) -> Result<Self> {
        if weights.len() != self.n() || weights.contains(&0) {
            return Err(Error::Degenerate("weights must be positive, one per coordinate".into()));
        }
        self.weights = weights;
        Ok(self)
    }

    /// `SQED_n`: the diagonal `G_m` in `G_m^n`.
    pub fn sqed(n: usize) -> Self {
        Self::new(vec![vec![1]; n]).expect("diagonal embedding has rank 1")
    }

    /// Parse `"(a_1,...,a_n)"` as a single column, or `"r_1;r_2;...;r_n"` with
    /// comma-separated rows.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|u| u.strip_suffix(')')).unwrap_or(t);
        let num = |x: &str| -> Result<i64> {
            let x = x.trim().trim_matches(|c| c == '(' || c == ')').trim();
            x.parse().map_err(|_| Error::Parse(format!("bad matrix entry '{x}'")))
        };
        let rows: Vec<Vec<i64>> = if t.contains(';') {
            t.split(';').map(|row| row.split(',').map(num).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?
        } else {
            t.split(',').map(|x| Ok(vec![num(x)?])).collect::<Result<_>>()?
        };
        Self::new(rows)
    }

    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    /// Rank of `K`.
    pub fn rank(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    fn rational(&self) -> Vec<Vec<BigRational>> {
        self.matrix.iter().map(|row| row.iter().map(|&v| rat(v)).collect()).collect()
    }
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Row-reduce in place; returns pivot columns.
fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (v, pr) in m[i].iter_mut().zip(&pivot_row) {
                    *v -= &f * pr;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

fn rank(m: &[Vec<BigRational>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Basis of `{c : M c = 0}` for an `rows x cols` matrix.
fn kernel(m: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

/// Scale a rational vector to a primitive integer vector with the first nonzero entry positive.
fn primitive(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let mut out: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
    if out.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in out.iter_mut() {
            *x = -x.clone();
        }
    }
    out
}

/// `Some(circuit)` when `support` is the support of an elementary vector of the column span.
fn circuit_on(data: &HypertoricData, a: &[Vec<BigRational>], support: &[usize]) -> Result<Option<Circuit>> {
    let n = data.n();
    let r = data.rank();
    let outside: Vec<Vec<BigRational>> = (0..n).filter(|i| !support.contains(i)).map(|i| a[i].clone()).collect();
    let ker = if outside.is_empty() {
        (0..r).map(|j| (0..r).map(|i| if i == j { BigRational::one() } else { BigRational::zero() }).collect()).collect()
    } else {
        kernel(&outside, r)
    };
    if ker.len() != 1 {
        return Ok(None);
    }
    let c = &ker[0];
    let v: Vec<BigRational> = (0..n).map(|i| a[i].iter().zip(c).map(|(x, y)| x * y).sum()).collect();
    if support.iter().any(|&i| v[i].is_zero()) {
        return Ok(None);
    }
    let vp = primitive(&v);
    // The curve class scales with the vector.
    let scale = BigRational::from_integer(vp[support[0]].clone()) / &v[support[0]];
    let class_q: Vec<BigRational> = c.iter().map(|x| x * &scale).collect();
    if class_q.iter().any(|x| !x.is_integer()) {
        return Err(Error::Degenerate(format!(
            "circuit on {:?} has a non-integral curve class; the columns do not span a saturated lattice",
            support.iter().map(|i| i + 1).collect::<Vec<_>>()
        )));
    }
    let to_i64 = |x: &BigInt| x.to_i64().ok_or_else(|| Error::Degenerate("entry overflow".into()));
    let vector: Vec<i64> = vp.iter().map(to_i64).collect::<Result<_>>()?;
    let class: Vec<i64> = class_q.iter().map(|x| to_i64(&x.to_integer())).collect::<Result<_>>()?;
    Ok(Some(Circuit {
        support: support.to_vec(),
        positive: support.iter().copied().filter(|&i| vector[i] > 0).collect(),
        negative: support.iter().copied().filter(|&i| vector[i] < 0).collect(),
        vector,
        class,
    }))
}

/// All circuits, ordered by support size and then lexicographically.
pub fn circuits(data: &HypertoricData) -> Result<Vec<Circuit>> {
    let n = data.n();
    if n > 20 {
        return Err(Error::Domain(format!("circuit enumeration limited to n <= 20, got {n}")));
    }
    let a = data.rational();
    let masks: Vec<u32> = (1u32..(1 << n)).collect();
    let mut found: Vec<Circuit> = masks
        .par_iter()
        .map(|&mask| {
            let support: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            circuit_on(data, &a, &support)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    found.sort_by(|x, y| (x.support.len(), &x.support).cmp(&(y.support.len(), &y.support)));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c = circuits(&HypertoricData::sqed(2)).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].support, vec![0, 1]);
        assert!(c[0].negative.is_empty());
        let c = circuits(&HypertoricData::parse("(1)").unwrap()).unwrap();
        assert_eq!(c[0].support, vec![0]);
        let c = circuits(&HypertoricData::parse("(1,1,-1)").unwrap()).unwrap();
        assert_eq!(c[0].positive, vec![0, 1]);
        assert_eq!(c[0].negative, vec![2]);
        assert_eq!(c[0].class, vec![1]);
    }

    #[test]
    fn parse_rows() {
        let d = HypertoricData::parse("1,0;0,1;1,1").unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.rank(), 2);
        assert!(HypertoricData::parse("1,0;0").is_err());
        assert!(HypertoricData::parse("(0,0)").is_err());
    }

    #[test]
    fn non_saturated_is_an_error() {
        assert!(circuits(&HypertoricData::parse("(2)").unwrap()).is_err());
    }
}
