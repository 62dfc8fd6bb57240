//! Brute-force reference computations used only by tests.
//!
//! Nothing here shares code with the engine: vectors are plain rational
//! slices, linear systems are solved by Gaussian elimination and polyhedra
//! are explored by enumerating every basic solution.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Unique solution of the square system `a·x = b`, or `None` if singular.
pub fn solve_square(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = b.len();
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = Q::one() / &m[col][col];
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=n {
                    let delta = &factor * &m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Vertices of `{x ∈ ℝⁿ : a_i·x ≥ b_i, e_j·x = d_j}`, found by making every
/// possible choice of `n − #eq` inequalities tight. Equalities must be
/// linearly independent. The result is deduplicated and sorted.
pub fn vertices(dim: usize, ineqs: &[(Vec<Q>, Q)], eqs: &[(Vec<Q>, Q)]) -> Vec<Vec<Q>> {
    let free = dim - eqs.len();
    let mut found: Vec<Vec<Q>> = Vec::new();
    for_each_subset(ineqs.len(), free, |tight| {
        let mut a: Vec<Vec<Q>> = eqs.iter().map(|(r, _)| r.clone()).collect();
        let mut b: Vec<Q> = eqs.iter().map(|(_, v)| v.clone()).collect();
        for &t in tight {
            a.push(ineqs[t].0.clone());
            b.push(ineqs[t].1.clone());
        }
        if let Some(x) = solve_square(&a, &b) {
            if ineqs.iter().all(|(row, rhs)| dot(row, &x) >= *rhs) {
                found.push(x);
            }
        }
    });
    found.sort();
    found.dedup();
    found
}

/// Extreme points of `{p ≥ 0, Σp = 1, p·g ≥ 0 for every g in constraints}`.
pub fn pmf_vertices(dim: usize, constraints: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut ineqs: Vec<(Vec<Q>, Q)> = (0..dim)
        .map(|i| {
            let mut e = vec![Q::zero(); dim];
            e[i] = Q::one();
            (e, Q::zero())
        })
        .collect();
    ineqs.extend(constraints.iter().map(|g| (g.clone(), Q::zero())));
    vertices(dim, &ineqs, &[(vec![Q::one(); dim], Q::one())])
}

/// `(min, max)` of `p(f·I_B)/p(B)` over the vertices with `p(B) > 0`,
/// which is also the range over the whole polytope minus its `p(B) = 0` face.
pub fn conditional_range(vertices: &[Vec<Q>], f: &[Q], cond: &[bool]) -> Option<(Q, Q)> {
    let mut range: Option<(Q, Q)> = None;
    for p in vertices {
        let mass: Q = p
            .iter()
            .zip(cond)
            .filter(|(_, &c)| c)
            .map(|(v, _)| v.clone())
            .sum();
        if !mass.is_positive() {
            continue;
        }
        let num: Q = p
            .iter()
            .zip(f)
            .zip(cond)
            .filter(|(_, &c)| c)
            .map(|((pv, fv), _)| pv * fv)
            .sum();
        let value = num / mass;
        range = Some(match range {
            None => (value.clone(), value),
            Some((lo, hi)) => (lo.min(value.clone()), hi.max(value)),
        });
    }
    range
}

/// `min q·(f·I_B)` over `{q ≥ 0, Σ_B q = 1, q·h ≥ 0 for h in constraints}`.
///
/// The set is a pointed polyhedron and the objective is bounded below on
/// it, so a minimum sits at a basic feasible solution whenever the set is
/// non-empty.
pub fn conditioned_minimum(constraints: &[Vec<Q>], f: &[Q], cond: &[bool]) -> Option<Q> {
    let dim = f.len();
    let mut ineqs: Vec<(Vec<Q>, Q)> = (0..dim)
        .map(|i| {
            let mut e = vec![Q::zero(); dim];
            e[i] = Q::one();
            (e, Q::zero())
        })
        .collect();
    ineqs.extend(constraints.iter().map(|g| (g.clone(), Q::zero())));
    let on_b: Vec<Q> = cond
        .iter()
        .map(|&c| if c { Q::one() } else { Q::zero() })
        .collect();
    let objective: Vec<Q> = f
        .iter()
        .zip(cond)
        .map(|(v, &c)| if c { v.clone() } else { Q::zero() })
        .collect();
    vertices(dim, &ineqs, &[(on_b, Q::one())])
        .iter()
        .map(|v| dot(v, &objective))
        .min()
}

/// A cone generator as seen by the oracle: a value vector and the set on
/// which it may be strictly improved.
#[derive(Debug, Clone)]
pub struct OpenGenerator {
    pub values: Vec<Q>,
    pub strict_on: Vec<bool>,
}

/// Lower prevision of `f` given `B` for the cone generated by the exact
/// gambles `g + ε·I_S`. As `ε ↓ 0` these cones increase to the cone with
/// open generators, so this value increases to its lower prevision.
pub fn perturbed_lower_prevision(
    gens: &[OpenGenerator],
    f: &[Q],
    cond: &[bool],
    eps: &Q,
) -> Option<Q> {
    let shifted: Vec<Vec<Q>> = gens
        .iter()
        .map(|g| {
            g.values
                .iter()
                .zip(&g.strict_on)
                .map(|(v, &s)| if s { v + eps } else { v.clone() })
                .collect()
        })
        .collect();
    conditioned_minimum(&shifted, f, cond)
}

/// Whether some `λ ≥ 0` on a grid `{0, 1/d, …, m/d}` puts `f − Σλ g ≥ 0`
/// with `Σλ > 0`.
pub fn grid_member(gens: &[Vec<Q>], f: &[Q], max_num: i64, den: i64) -> bool {
    let k = gens.len();
    let mut counter = vec![0i64; k];
    loop {
        let lambda: Vec<Q> = counter.iter().map(|&c| q(c, den)).collect();
        if counter.iter().any(|&c| c > 0) {
            let ok = (0..f.len()).all(|x| {
                let combo: Q = lambda.iter().zip(gens).map(|(l, g)| l * &g[x]).sum();
                f[x] >= combo
            });
            if ok {
                return true;
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            counter[i] += 1;
            if counter[i] <= max_num {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}
