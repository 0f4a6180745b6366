//! The discriminant group `L*/L`, its `Q/Z`-valued form, subgroups and
//! metabolizers.
//!
//! Groups are kept in Smith-normal-form coordinates: an element is a tuple
//! `(a_1, ..., a_k)` with `0 <= a_i < d_i` and `d_1 | ... | d_k`. Subgroups are
//! stored as explicit sorted element lists, which is fine at the sizes the
//! enumeration cap allows.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{self, IntMatrix};
use crate::lattice::{DualVector, Lattice};
use crate::rational::{self, Rat};

pub const DEFAULT_MAX_GROUP: u64 = 10_000;
pub const DEFAULT_MAX_SUBGROUPS: usize = 200_000;

/// Caps and parallelism shared by the enumeration routines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_group: u64,
    pub max_subgroups: usize,
    pub threads: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_group: DEFAULT_MAX_GROUP, max_subgroups: DEFAULT_MAX_SUBGROUPS, threads: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    pub elements: Vec<GroupElement>,
    pub generators: Vec<GroupElement>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

/// Lifts of the cyclic generators to `L*` and the matrix realizing `π`.
#[derive(Clone, Debug, PartialEq)]
struct Lifts {
    generators: Vec<DualVector>,
    // rows of the left Smith transform belonging to nontrivial divisors
    projection: IntMatrix,
    gram: IntMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscGroup {
    orders: Vec<u64>,
    pairing: Vec<Vec<Rat>>,
    lifts: Option<Lifts>,
}

fn to_order(d: &BigInt, cap: Option<u64>) -> Result<u64> {
    d.to_u64().ok_or_else(|| Error::GroupTooLarge { order: d.to_string(), cap: cap.unwrap_or(u64::MAX) })
}

/// The discriminant group of `l` with its form `λ(x, y) = -Q(x̄, ȳ) mod 1`.
pub fn disc_group(l: &Lattice) -> Result<DiscGroup> {
    let s = exactmat::snf(l.gram());
    let n = l.rank();
    let nontrivial: Vec<usize> = (0..n).filter(|&i| !s.d[(i, i)].is_one()).collect();
    let orders = nontrivial.iter().map(|&i| to_order(&s.d[(i, i)], None)).collect::<Result<Vec<_>>>()?;
    let u_inv = exactmat::inverse(&s.u)?;
    // generator i has dual coordinates U⁻¹ e_i
    let generators: Vec<DualVector> = nontrivial
        .iter()
        .map(|&i| {
            let col: Vec<Rat> = (0..n).map(|r| u_inv[(r, i)].clone()).collect();
            l.from_dual_coords(&col)
        })
        .collect();
    let pairing = generators
        .iter()
        .map(|x| generators.iter().map(|y| rational::frac(&-l.pairing(x, y))).collect())
        .collect();
    Ok(DiscGroup {
        orders,
        pairing,
        lifts: Some(Lifts { generators, projection: s.u.select_rows(&nontrivial), gram: l.gram().clone() }),
    })
}

impl DiscGroup {
    /// A group given only by its invariant factors and pairing table.
    pub fn from_table(orders: Vec<u64>, pairing: Vec<Vec<Rat>>) -> Result<DiscGroup> {
        let bad = |m: String| Error::InvalidTable(m);
        if orders.iter().any(|&d| d < 2) {
            return Err(bad("orders must be at least 2".into()));
        }
        if orders.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(bad("orders must form a divisibility chain".into()));
        }
        let k = orders.len();
        if pairing.len() != k || pairing.iter().any(|r| r.len() != k) {
            return Err(bad(format!("pairing must be {k}x{k}")));
        }
        for i in 0..k {
            for j in 0..k {
                let p = &pairing[i][j];
                if p < &Rat::zero() || p >= &Rat::one() {
                    return Err(bad(format!("pairing[{i}][{j}] = {p} is outside [0, 1)")));
                }
                if p != &pairing[j][i] {
                    return Err(bad("pairing is not symmetric".into()));
                }
                if !rational::is_integer(&(p * Rat::from_integer(BigInt::from(orders[i])))) {
                    return Err(bad(format!("order {} times pairing[{i}][{j}] is not integral", orders[i])));
                }
            }
        }
        Ok(DiscGroup { orders, pairing, lifts: None })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn pairing(&self) -> &[Vec<Rat>] {
        &self.pairing
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> BigInt {
        self.orders.iter().map(|&d| BigInt::from(d)).product()
    }

    /// The same group with `λ` replaced by `-λ`.
    pub fn negated(&self) -> DiscGroup {
        let pairing = self.pairing.iter().map(|r| r.iter().map(|p| rational::frac(&-p)).collect()).collect();
        DiscGroup { orders: self.orders.clone(), pairing, lifts: self.lifts.clone() }
    }

    pub fn same_form(&self, other: &DiscGroup) -> bool {
        self.orders == other.orders && self.pairing == other.pairing
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut e = self.zero();
        e.0[i] = 1;
        e
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        GroupElement(self.orders.iter().zip(x.0.iter().zip(&y.0)).map(|(&d, (&a, &b))| (a + b) % d).collect())
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        GroupElement(self.orders.iter().zip(&x.0).map(|(&d, &a)| (d - a) % d).collect())
    }

    pub fn scale(&self, k: u64, x: &GroupElement) -> GroupElement {
        GroupElement(
            self.orders.iter().zip(&x.0).map(|(&d, &a)| ((a as u128 * k as u128) % d as u128) as u64).collect(),
        )
    }

    pub fn element_order(&self, x: &GroupElement) -> u64 {
        self.orders.iter().zip(&x.0).fold(1u64, |acc, (&d, &a)| acc.lcm(&(d / d.gcd(&a))))
    }

    pub fn is_valid(&self, x: &GroupElement) -> bool {
        x.0.len() == self.rank() && x.0.iter().zip(&self.orders).all(|(a, d)| a < d)
    }

    /// `λ(x, y)` as a rational in `[0, 1)`.
    pub fn lambda(&self, x: &GroupElement, y: &GroupElement) -> Rat {
        let mut acc = Rat::zero();
        for (i, &a) in x.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.0.iter().enumerate() {
                if b != 0 {
                    acc += &self.pairing[i][j] * Rat::from_integer(BigInt::from(a) * BigInt::from(b));
                }
            }
        }
        rational::frac(&acc)
    }

    /// `π(v)` for `v ∈ L*`. Only available for groups built from a lattice.
    pub fn project(&self, v: &DualVector) -> Result<GroupElement> {
        let lifts = self.lifts.as_ref().ok_or_else(|| Error::Parse("group has no lattice presentation".into()))?;
        let n = lifts.gram.rows();
        let mut u = Vec::with_capacity(n);
        for i in 0..n {
            let ui: Rat = (0..n).map(|j| &v.0[j] * &lifts.gram[(i, j)]).sum();
            if !rational::is_integer(&ui) {
                return Err(Error::NotInDualLattice);
            }
            u.push(ui.to_integer());
        }
        let coeffs = self
            .orders
            .iter()
            .enumerate()
            .map(|(r, &d)| {
                let s: BigInt = (0..n).map(|j| &lifts.projection[(r, j)] * &u[j]).sum();
                s.mod_floor(&BigInt::from(d)).to_u64().expect("reduced below order")
            })
            .collect();
        Ok(GroupElement(coeffs))
    }

    /// A lift of `x` to `L*`, in `L`-coordinates.
    pub fn lift(&self, x: &GroupElement) -> Result<DualVector> {
        let lifts = self.lifts.as_ref().ok_or_else(|| Error::Parse("group has no lattice presentation".into()))?;
        let n = lifts.gram.rows();
        let mut acc = DualVector::zero(n);
        for (g, &a) in lifts.generators.iter().zip(&x.0) {
            if a != 0 {
                acc = acc.add(&g.scale(&Rat::from_integer(BigInt::from(a))));
            }
        }
        Ok(acc)
    }

    pub fn generator_lifts(&self) -> Option<&[DualVector]> {
        self.lifts.as_ref().map(|l| l.generators.as_slice())
    }

    // -- enumeration -- //

    pub fn check_size(&self, limits: &Limits) -> Result<u64> {
        let order = self.order();
        match order.to_u64() {
            Some(o) if o <= limits.max_group => Ok(o),
            _ => Err(Error::GroupTooLarge { order: order.to_string(), cap: limits.max_group }),
        }
    }

    /// Mixed-radix index; index order coincides with lexicographic order.
    pub fn index_of(&self, x: &GroupElement) -> usize {
        self.orders.iter().zip(&x.0).fold(0usize, |acc, (&d, &a)| acc * d as usize + a as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut coeffs = vec![0u64; self.rank()];
        for i in (0..self.rank()).rev() {
            let d = self.orders[i] as usize;
            coeffs[i] = (idx % d) as u64;
            idx /= d;
        }
        GroupElement(coeffs)
    }

    pub fn elements(&self, limits: &Limits) -> Result<Vec<GroupElement>> {
        let n = self.check_size(limits)? as usize;
        Ok((0..n).map(|i| self.element_at(i)).collect())
    }

    /// Builds a [`Subgroup`] from its member indices.
    pub fn subgroup_from_indices(&self, members: &[usize]) -> Subgroup {
        let mut idx = members.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let elements: Vec<GroupElement> = idx.iter().map(|&i| self.element_at(i)).collect();
        let generators = self.minimal_generators(&elements);
        Subgroup { elements, generators }
    }

    /// The subgroup generated by `gens`.
    pub fn span(&self, gens: &[GroupElement]) -> Subgroup {
        let mut members: HashSet<GroupElement> = HashSet::from([self.zero()]);
        let mut frontier = vec![self.zero()];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = self.add(&x, g);
                if members.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let idx: Vec<usize> = members.iter().map(|x| self.index_of(x)).collect();
        self.subgroup_from_indices(&idx)
    }

    /// Greedy generating set: repeatedly take the element of largest order
    /// modulo what is already generated. An element of maximal order spans a
    /// cyclic direct summand, so the result has the minimal possible size.
    fn minimal_generators(&self, elements: &[GroupElement]) -> Vec<GroupElement> {
        let mut gens: Vec<GroupElement> = Vec::new();
        let mut spanned: HashSet<GroupElement> = HashSet::from([self.zero()]);
        while spanned.len() < elements.len() {
            let mut best: Option<(u64, &GroupElement)> = None;
            for x in elements {
                let k = self.order_modulo(x, &spanned);
                if best.is_none_or(|(bk, _)| k > bk) {
                    best = Some((k, x));
                }
            }
            let (k, g) = best.expect("nonempty");
            let g = g.clone();
            let base: Vec<GroupElement> = spanned.iter().cloned().collect();
            let mut mult = self.zero();
            for _ in 1..k {
                mult = self.add(&mult, &g);
                for s in &base {
                    spanned.insert(self.add(s, &mult));
                }
            }
            gens.push(g);
        }
        gens
    }

    fn order_modulo(&self, x: &GroupElement, sub: &HashSet<GroupElement>) -> u64 {
        let mut k = 1;
        let mut m = x.clone();
        while !sub.contains(&m) {
            m = self.add(&m, x);
            k += 1;
        }
        k
    }
}

/// Cached addition on element indices.
struct IndexedGroup<'a> {
    group: &'a DiscGroup,
    size: usize,
    radix: Vec<usize>,
}

impl<'a> IndexedGroup<'a> {
    fn new(group: &'a DiscGroup, limits: &Limits) -> Result<Self> {
        let size = group.check_size(limits)? as usize;
        let mut radix = vec![1usize; group.rank()];
        for i in (0..group.rank().saturating_sub(1)).rev() {
            radix[i] = radix[i + 1] * group.orders[i + 1] as usize;
        }
        Ok(IndexedGroup { group, size, radix })
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for (i, &d) in self.group.orders.iter().enumerate() {
            let d = d as usize;
            let ai = (a / self.radix[i]) % d;
            let bi = (b / self.radix[i]) % d;
            out += ((ai + bi) % d) * self.radix[i];
        }
        out
    }

    fn scale(&self, k: usize, a: usize) -> usize {
        let mut out = 0;
        for (i, &d) in self.group.orders.iter().enumerate() {
            let d = d as usize;
            let ai = (a / self.radix[i]) % d;
            out += ((ai * (k % d)) % d) * self.radix[i];
        }
        out
    }
}

/// All subgroups of order `m`, sorted by element list.
///
/// Depth-first growth from the trivial group by adjoining one element at a
/// time, keeping only intermediate subgroups whose order divides `m`.
pub fn subgroups_of_order(g: &DiscGroup, m: u64, limits: &Limits) -> Result<Vec<Subgroup>> {
    let ig = IndexedGroup::new(g, limits)?;
    let n = ig.size;
    if m == 0 || !(n as u64).is_multiple_of(m) {
        return Ok(Vec::new());
    }
    let m = m as usize;
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut stack: Vec<Vec<usize>> = vec![vec![0]];
    seen.insert(vec![0]);
    let mut out: Vec<Vec<usize>> = Vec::new();
    while let Some(sub) = stack.pop() {
        if sub.len() == m {
            out.push(sub);
            continue;
        }
        let mut member = vec![false; n];
        for &s in &sub {
            member[s] = true;
        }
        let mut skip = member.clone();
        for x in 0..n {
            if skip[x] {
                continue;
            }
            // order of x modulo sub, abandoning once the index would not divide m
            let max_k = m / sub.len();
            let mut k = 1;
            let mut mult = x;
            while !member[mult] && k <= max_k {
                mult = ig.add(mult, x);
                k += 1;
            }
            if k > max_k || !m.is_multiple_of(sub.len() * k) {
                continue;
            }
            // ⟨sub, jx⟩ = ⟨sub, x⟩ whenever gcd(j, k) = 1
            for j in 1..k {
                if j.gcd(&k) == 1 {
                    let jx = ig.scale(j, x);
                    for &s in &sub {
                        skip[ig.add(s, jx)] = true;
                    }
                }
            }
            let mut grown = Vec::with_capacity(sub.len() * k);
            let mut jx = 0;
            for _ in 0..k {
                grown.extend(sub.iter().map(|&s| ig.add(s, jx)));
                jx = ig.add(jx, x);
            }
            grown.sort_unstable();
            if seen.insert(grown.clone()) {
                if seen.len() > limits.max_subgroups {
                    return Err(Error::GroupTooLarge {
                        order: format!("{n} (more than {} subgroups)", limits.max_subgroups),
                        cap: limits.max_group,
                    });
                }
                stack.push(grown);
            }
        }
    }
    out.sort();
    Ok(out.iter().map(|s| g.subgroup_from_indices(s)).collect())
}

/// `λ` vanishes on `h × h`; checking generator pairs suffices by bilinearity.
pub fn is_isotropic(g: &DiscGroup, h: &Subgroup) -> bool {
    h.generators.iter().all(|x| h.generators.iter().all(|y| g.lambda(x, y).is_zero()))
}

/// Subgroups `M` with `|M|² = |G|` on which `λ` vanishes identically.
pub fn metabolizers_of(g: &DiscGroup, limits: &Limits) -> Result<Vec<Subgroup>> {
    let order = g.check_size(limits)?;
    let root = order.sqrt();
    if root * root != order {
        return Ok(Vec::new());
    }
    Ok(subgroups_of_order(g, root, limits)?.into_iter().filter(|m| is_isotropic(g, m)).collect())
}

pub fn metabolizers(l: &Lattice, limits: &Limits) -> Result<Vec<Subgroup>> {
    metabolizers_of(&disc_group(l)?, limits)
}

/// `H° = {x : λ(x, h) = 0 for all h ∈ H}`.
pub fn annihilator(g: &DiscGroup, h: &Subgroup, limits: &Limits) -> Result<Subgroup> {
    let members: Vec<usize> = g
        .elements(limits)?
        .iter()
        .filter(|x| h.generators.iter().all(|y| g.lambda(x, y).is_zero()))
        .map(|x| g.index_of(x))
        .collect();
    Ok(g.subgroup_from_indices(&members))
}
