//! Slow, exhaustive reference implementations.
//!
//! These share no search code with the optimized paths and refuse inputs
//! beyond their caps instead of searching partially.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::discform::{DiscGroup, Subgroup};
use crate::error::{Error, Result};
use crate::exactmat::{self, IntMatrix};
use crate::lattice::{characteristic_base, Lattice};
use crate::rational::Rat;

pub const EMBED_MAX_RANK: usize = 8;
pub const EMBED_MAX_DIAGONAL: i64 = 36;
pub const SUBGROUP_MAX_ORDER: u64 = 512;
pub const SUBGROUP_MAX_COUNT: usize = 100_000;
pub const STANDARD_MAX_RANK: usize = 12;
pub const MAX_POINTS: u64 = 5_000_000;

fn too_large(what: impl Into<String>) -> Error {
    Error::SearchTooLarge(what.into())
}

/// All `v ∈ Zⁿ` with `v·v = norm`.
fn vectors_of_norm(n: usize, norm: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, left: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == n {
            if left == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let r = left.sqrt();
        for x in -r..=r {
            prefix.push(x);
            rec(n, left - x * x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, norm, &mut Vec::new(), &mut out);
    out
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Images `v₁..vₙ ∈ Zⁿ` of the basis of `L` realizing its Gram matrix, if any.
///
/// The first vector is taken with nonnegative, nonincreasing coordinates, which
/// every solution can be moved to by a signed permutation.
pub fn brute_embed(l: &Lattice) -> Result<Option<Vec<Vec<i64>>>> {
    let n = l.rank();
    if n > EMBED_MAX_RANK {
        return Err(too_large(format!("rank {n} exceeds the embedding oracle cap {EMBED_MAX_RANK}")));
    }
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            g[i][j] = l.gram()[(i, j)].to_i64().ok_or_else(|| too_large("Gram entry out of range"))?;
        }
        if g[i][i] > EMBED_MAX_DIAGONAL {
            return Err(too_large(format!("diagonal entry {} exceeds the cap {EMBED_MAX_DIAGONAL}", g[i][i])));
        }
    }
    let mut by_norm: HashMap<i64, Vec<Vec<i64>>> = HashMap::new();
    for i in 0..n {
        by_norm.entry(g[i][i]).or_insert_with(|| vectors_of_norm(n, g[i][i]));
    }

    fn search(i: usize, g: &[Vec<i64>], by_norm: &HashMap<i64, Vec<Vec<i64>>>, chosen: &mut Vec<Vec<i64>>) -> bool {
        if i == g.len() {
            return true;
        }
        for v in &by_norm[&g[i][i]] {
            if i == 0 && !(v.iter().all(|&x| x >= 0) && v.windows(2).all(|w| w[0] >= w[1])) {
                continue;
            }
            if (0..i).all(|j| dot(v, &chosen[j]) == g[i][j]) {
                chosen.push(v.clone());
                if search(i + 1, g, by_norm, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = Vec::new();
    Ok(search(0, &g, &by_norm, &mut chosen).then_some(chosen))
}

/// Every point of `offset + step·Zⁿ` of square at most `bound`.
///
/// Plain Fincke–Pohst enumeration: each coordinate runs over the full
/// interval allowed by the remaining budget.
fn points_within(gram: &IntMatrix, offset: &[Rat], step: i64, bound: &Rat) -> Result<Vec<Vec<Rat>>> {
    let ldl = exactmat::rational_cholesky(&gram.to_rat())?;
    let n = offset.len();
    let step = Rat::from_integer(BigInt::from(step));
    let mut out = Vec::new();
    let mut point = vec![Rat::zero(); n];
    let mut visited = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        left: &Rat,
        ldl: &exactmat::Ldl,
        offset: &[Rat],
        step: &Rat,
        point: &mut Vec<Rat>,
        out: &mut Vec<Vec<Rat>>,
        visited: &mut u64,
    ) -> Result<()> {
        *visited += 1;
        if *visited > MAX_POINTS {
            return Err(too_large(format!("more than {MAX_POINTS} nodes in exhaustive enumeration")));
        }
        let n = point.len();
        let mut c = Rat::zero();
        for j in i + 1..n {
            c -= &ldl.lower[(j, i)] * &point[j];
        }
        // |w - c| ≤ sqrt(left / p) ≤ s + 1 with s = ⌊sqrt(⌊left / p⌋)⌋
        let s = Rat::from_integer((left / &ldl.pivots[i]).floor().to_integer().sqrt() + 1);
        let lo = ((&c - &s - &offset[i]) / step).ceil().to_integer();
        let hi = ((&c + &s - &offset[i]) / step).floor().to_integer();
        let mut k = lo;
        while k <= hi {
            let w = &offset[i] + step * Rat::from_integer(k.clone());
            let dev = &w - &c;
            let rest = left - &ldl.pivots[i] * &dev * &dev;
            if !rest.is_negative() {
                point[i] = w;
                if i == 0 {
                    out.push(point.clone());
                } else {
                    rec(i - 1, &rest, ldl, offset, step, point, out, visited)?;
                }
            }
            k += 1;
        }
        Ok(())
    }

    if n > 0 {
        rec(n - 1, bound, &ldl, offset, &step, &mut point, &mut out, &mut visited)?;
    } else if !bound.is_negative() {
        out.push(Vec::new());
    }
    Ok(out)
}

/// Exhaustive minimum of `χ²` over characteristic vectors of a unimodular `U`
/// with `χ² ≤ bound`. `None` when no characteristic vector is that short.
pub fn brute_char_min(u: &Lattice, bound: &BigInt) -> Result<Option<BigInt>> {
    if !u.is_unimodular() {
        return Err(Error::NotUnimodular(u.discriminant().to_string()));
    }
    let base = characteristic_base(u).base;
    let pts = points_within(u.gram(), &base.0, 2, &Rat::from_integer(bound.clone()))?;
    let g = u.gram_rat();
    Ok(pts.iter().map(|p| exactmat::bilinear(&g, p, p).to_integer()).min())
}

/// Whether `U` is `Zⁿ`: exactly `2n` vectors of square 1, spanning `U`.
pub fn is_standard(u: &Lattice) -> Result<bool> {
    let n = u.rank();
    if n > STANDARD_MAX_RANK {
        return Err(too_large(format!("rank {n} exceeds the cap {STANDARD_MAX_RANK}")));
    }
    let ones = points_within(u.gram(), &vec![Rat::zero(); n], 1, &Rat::from_integer(BigInt::from(1)))?;
    let g = u.gram_rat();
    let units: Vec<Vec<Rat>> = ones.into_iter().filter(|p| !exactmat::bilinear(&g, p, p).is_zero()).collect();
    if units.len() != 2 * n {
        return Ok(false);
    }
    // keep one of each ± pair and check they form a basis
    let half: Vec<Vec<Rat>> = units
        .iter()
        .filter(|p| p.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive()))
        .cloned()
        .collect();
    let m = exactmat::RatMatrix::from_rows(&half);
    Ok(half.len() == n && exactmat::det_rat(&m).abs() == Rat::from_integer(BigInt::from(1)))
}

/// All subgroups, as joins of cyclic subgroups. `H + K = {h + k}` in an abelian group.
pub fn brute_subgroups(g: &DiscGroup) -> Result<Vec<Subgroup>> {
    let order = g.order();
    if order > BigInt::from(SUBGROUP_MAX_ORDER) {
        return Err(too_large(format!("group of order {order} exceeds the cap {SUBGROUP_MAX_ORDER}")));
    }
    let size = order.to_usize().expect("small order");
    let elems: Vec<_> = (0..size).map(|i| g.element_at(i)).collect();
    let cyclic: BTreeSet<Vec<usize>> = elems
        .iter()
        .map(|x| {
            let mut members = vec![0usize];
            let mut y = x.clone();
            while !y.is_zero() {
                members.push(g.index_of(&y));
                y = g.add(&y, x);
            }
            members.sort_unstable();
            members
        })
        .collect();
    let mut seen: BTreeSet<Vec<usize>> = cyclic.clone();
    let mut frontier: Vec<Vec<usize>> = cyclic.iter().cloned().collect();
    while let Some(h) = frontier.pop() {
        for c in &cyclic {
            let sum: BTreeSet<usize> =
                h.iter().flat_map(|&a| c.iter().map(move |&b| (a, b))).map(|(a, b)| g.index_of(&g.add(&elems[a], &elems[b]))).collect();
            let sum: Vec<usize> = sum.into_iter().collect();
            if seen.insert(sum.clone()) {
                if seen.len() > SUBGROUP_MAX_COUNT {
                    return Err(too_large(format!("more than {SUBGROUP_MAX_COUNT} subgroups")));
                }
                frontier.push(sum);
            }
        }
    }
    Ok(seen.iter().map(|s| g.subgroup_from_indices(s)).collect())
}

/// Metabolizers by filtering [`brute_subgroups`] with the definition.
pub fn brute_metabolizers(g: &DiscGroup) -> Result<Vec<Subgroup>> {
    let order = g.order();
    let mut out: Vec<Subgroup> = brute_subgroups(g)?
        .into_iter()
        .filter(|h| BigInt::from(h.order()).pow(2) == order)
        .filter(|h| h.elements.iter().all(|x| h.elements.iter().all(|y| g.lambda(x, y).is_zero())))
        .collect();
    out.sort_by(|a, b| a.elements.cmp(&b.elements));
    Ok(out)
}
