//! Lattice correction terms and the embedding test.
//!
//! For a unimodular positive definite `U` of rank `n`,
//! `d_U = min over characteristic χ of (χ² - n) / 4`. For a positive definite
//! `L`, the set `D` collects `d_{U(M)}` over all metabolizers `M`, and `L`
//! embeds in `Zⁿ` exactly when `0 ∈ D`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::discform::{self, disc_group, DiscGroup, GroupElement, Limits, Subgroup};
use crate::enumerate::CosetSearch;
use crate::error::{Error, Result};
use crate::lattice::{characteristic_base, DualVector, Lattice};
use crate::overlattice::overlattice;
use crate::rational::{self, Rat};

/// Minimal characteristic square of a unimodular lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct MinimizationResult {
    pub minimum: BigInt,
    pub witness: DualVector,
    pub nodes_visited: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DEntry {
    pub metabolizer: Subgroup,
    #[serde(with = "rational::serde_rat")]
    pub d: Rat,
    /// `χ²` of the minimizer.
    pub min_square: String,
    /// A minimizing characteristic vector of `U(M)`, in `L`-coordinates.
    pub witness: DualVector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DSet {
    pub entries: Vec<DEntry>,
    pub contains_zero: bool,
}

impl DSet {
    pub fn values(&self) -> Vec<Rat> {
        self.entries.iter().map(|e| e.d.clone()).collect()
    }
}

/// Minimum of `χ²` over characteristic covectors of `L` projecting into `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstrainedMin {
    pub min_square: Rat,
    /// `(min_square - n) / 4`
    pub value: Rat,
    pub witness: DualVector,
    pub cosets: usize,
}

fn quarter_shift(square: &Rat, n: usize) -> Rat {
    (square - Rat::from_integer(BigInt::from(n))) / Rat::from_integer(BigInt::from(4))
}

pub fn min_char_square(u: &Lattice) -> Result<MinimizationResult> {
    if !u.is_unimodular() {
        return Err(Error::NotUnimodular(u.discriminant().to_string()));
    }
    let base = characteristic_base(u).base;
    let search = CosetSearch::new(&u.gram_rat())?;
    let two = rational::int(2);
    let r = search.minimize(&base.0, &two, None).expect("unbounded search always yields a point");
    debug_assert!(rational::is_integer(&r.norm));
    Ok(MinimizationResult { minimum: r.norm.to_integer(), witness: DualVector(r.point), nodes_visited: r.nodes })
}

pub fn d_lattice(u: &Lattice) -> Result<Rat> {
    let r = min_char_square(u)?;
    Ok(quarter_shift(&Rat::from_integer(r.minimum), u.rank()))
}

fn d_entry(l: &Lattice, g: &DiscGroup, m: &Subgroup) -> Result<DEntry> {
    let u = overlattice(l, g, m)?;
    let ul = u.to_lattice()?;
    let r = min_char_square(&ul)?;
    let w: Vec<Rat> = r.witness.0.clone();
    Ok(DEntry {
        metabolizer: m.clone(),
        d: quarter_shift(&Rat::from_integer(r.minimum.clone()), l.rank()),
        min_square: r.minimum.to_string(),
        witness: DualVector(u.to_l_coords(&w)),
    })
}

/// `D = {d_{U(M)}}` over all metabolizers, in canonical metabolizer order.
pub fn d_set(l: &Lattice, limits: &Limits) -> Result<DSet> {
    let g = disc_group(l)?;
    let metabolizers = discform::metabolizers_of(&g, limits)?;
    let threads = limits.threads.max(1).min(metabolizers.len().max(1));
    let entries: Vec<DEntry> = if threads <= 1 {
        metabolizers.iter().map(|m| d_entry(l, &g, m)).collect::<Result<_>>()?
    } else {
        let mut slots: Vec<Option<Result<DEntry>>> = vec![None; metabolizers.len()];
        std::thread::scope(|scope| {
            let chunk = metabolizers.len().div_ceil(threads);
            for (ms, out) in metabolizers.chunks(chunk).zip(slots.chunks_mut(chunk)) {
                let g = &g;
                scope.spawn(move || {
                    for (m, slot) in ms.iter().zip(out.iter_mut()) {
                        *slot = Some(d_entry(l, g, m));
                    }
                });
            }
        });
        slots.into_iter().map(|s| s.expect("every slot filled")).collect::<Result<_>>()?
    };
    let contains_zero = entries.iter().any(|e| e.d.is_zero());
    Ok(DSet { entries, contains_zero })
}

pub fn embeds_in_standard(l: &Lattice, limits: &Limits) -> Result<bool> {
    Ok(d_set(l, limits)?.contains_zero)
}

/// Minimum of `χ²` over `χ ∈ Char(L)` with `π(χ)` accepted by `keep`.
///
/// `Char(L) = χ₀ + 2L*` splits into the cosets `χ₀ + 2ĝ + 2L`, one for each
/// `g ∈ L*/L`, and `π(χ₀ + 2ĝ) = π(χ₀) + 2g`.
fn char_min_over(
    l: &Lattice,
    g: &DiscGroup,
    limits: &Limits,
    keep: impl Fn(&GroupElement) -> bool,
) -> Result<Option<ConstrainedMin>> {
    let base = characteristic_base(l).base;
    let p0 = g.project(&base)?;
    let search = CosetSearch::new(&l.gram_rat())?;
    let two = rational::int(2);
    let mut best: Option<(Rat, Vec<Rat>)> = None;
    let mut cosets = 0;
    for x in g.elements(limits)? {
        let image = g.add(&p0, &g.scale(2, &x));
        if !keep(&image) {
            continue;
        }
        cosets += 1;
        let offset = base.add(&g.lift(&x)?.scale(&two));
        if let Some(r) = search.minimize(&offset.0, &two, best.as_ref().map(|b| &b.0)) {
            best = Some((r.norm, r.point));
        }
    }
    Ok(best.map(|(min_square, point)| ConstrainedMin {
        value: quarter_shift(&min_square, l.rank()),
        min_square,
        witness: DualVector(point),
        cosets,
    }))
}

/// `min (χ² - n)/4` over characteristic covectors of `L` with `π(χ) ∈ M`.
pub fn constrained_min(l: &Lattice, g: &DiscGroup, m: &Subgroup, limits: &Limits) -> Result<ConstrainedMin> {
    char_min_over(l, g, limits, |x| m.contains(x))?.ok_or(Error::EmptyConstraintSet)
}

/// Same minimum restricted to a single class `π(χ) = x`; `None` when no
/// characteristic covector lies over `x`.
pub fn char_min_over_class(
    l: &Lattice,
    g: &DiscGroup,
    x: &GroupElement,
    limits: &Limits,
) -> Result<Option<ConstrainedMin>> {
    char_min_over(l, g, limits, |y| y == x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::IntMatrix;
    use crate::lattice::{a_gram, direct_sum, e8_gram, is_characteristic, make_lattice, negative_one_plus_a8_gram};
    use crate::rational::int;
    use num_traits::Signed;

    fn lat(g: IntMatrix) -> Lattice {
        make_lattice(g).unwrap()
    }

    fn z_plus_e8() -> IntMatrix {
        direct_sum(&IntMatrix::identity(1), &e8_gram())
    }

    #[test]
    fn char_square_examples() {
        for n in 1..=6 {
            let r = min_char_square(&lat(IntMatrix::identity(n))).unwrap();
            assert_eq!(r.minimum, BigInt::from(n));
            assert!(r.witness.0.iter().all(|w| w.abs() == int(1)));
        }
        let r = min_char_square(&lat(e8_gram())).unwrap();
        assert_eq!(r.minimum, BigInt::zero());
        assert_eq!(r.witness, DualVector::zero(8));
        let z_e8 = lat(z_plus_e8());
        let r = min_char_square(&z_e8).unwrap();
        assert_eq!(r.minimum, BigInt::from(1));
        assert!(is_characteristic(&z_e8, &r.witness).unwrap());
        assert_eq!(z_e8.norm(&r.witness), int(1));
    }

    #[test]
    fn d_examples() {
        assert_eq!(d_lattice(&lat(IntMatrix::identity(4))).unwrap(), int(0));
        assert_eq!(d_lattice(&lat(e8_gram())).unwrap(), int(-2));
        assert_eq!(d_lattice(&lat(z_plus_e8())).unwrap(), int(-2));
        assert!(matches!(d_lattice(&lat(IntMatrix::from_i64(&[vec![2]]))), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn d_set_examples() {
        let lim = Limits::default();
        let m9 = lat(negative_one_plus_a8_gram());
        let d = d_set(&m9, &lim).unwrap();
        assert_eq!(d.values(), vec![int(-2)]);
        assert!(!d.contains_zero);
        assert!(!embeds_in_standard(&m9, &lim).unwrap());

        let nine = lat(IntMatrix::from_i64(&[vec![9]]));
        let d = d_set(&nine, &lim).unwrap();
        assert_eq!(d.values(), vec![int(0)]);
        assert!(embeds_in_standard(&nine, &lim).unwrap());

        let two = lat(IntMatrix::from_i64(&[vec![2]]));
        let d = d_set(&two, &lim).unwrap();
        assert!(d.entries.is_empty());
        assert!(!d.contains_zero);

        assert!(embeds_in_standard(&lat(IntMatrix::identity(3)), &lim).unwrap());
    }

    #[test]
    fn d_set_witnesses_are_characteristic_in_overlattice() {
        let l = lat(direct_sum(&IntMatrix::identity(1), &a_gram(8)));
        let d = d_set(&l, &Limits::default()).unwrap();
        let e = &d.entries[0];
        // witness lies in L* and is characteristic for L (Char(U) ⊂ Char(L))
        assert!(is_characteristic(&l, &e.witness).unwrap());
        assert_eq!(l.norm(&e.witness).to_string(), e.min_square);
    }

    #[test]
    fn d_set_is_thread_count_independent() {
        let l = lat(crate::lattice::d_gram(4));
        let one = d_set(&l, &Limits::default()).unwrap();
        let many = d_set(&l, &Limits { threads: 3, ..Limits::default() }).unwrap();
        assert_eq!(one, many);
        assert_eq!(one.entries.len(), 3);
    }

    #[test]
    fn constrained_min_examples() {
        let lim = Limits::default();
        // unimodular, trivial M: constraint is vacuous
        let z3 = lat(IntMatrix::identity(3));
        let g = disc_group(&z3).unwrap();
        let cm = constrained_min(&z3, &g, &g.span(&[]), &lim).unwrap();
        assert_eq!(cm.value, d_lattice(&z3).unwrap());

        // <9> with M = {0,3,6}: exhaustive scan of odd k/9 with (k/9)²·9 ≤ 9
        // gives k ∈ {±1, ±3}; only ±3 project into M, so χ² = 1 and the value is 0
        let nine = lat(IntMatrix::from_i64(&[vec![9]]));
        let g = disc_group(&nine).unwrap();
        let m = g.span(&[GroupElement(vec![3])]);
        let cm = constrained_min(&nine, &g, &m, &lim).unwrap();
        assert_eq!(cm.min_square, int(1));
        assert_eq!(cm.value, int(0));
        assert_eq!(cm.cosets, 3);
    }

    #[test]
    fn per_class_minimum_of_nine() {
        // classes k mod 9 of odd k/9: smallest |k| per class gives χ² = k²/9
        let lim = Limits::default();
        let nine = lat(IntMatrix::from_i64(&[vec![9]]));
        let g = disc_group(&nine).unwrap();
        let want = [81, 1, 49, 9, 25, 25, 9, 49, 1];
        for (c, &k2) in want.iter().enumerate() {
            let r = char_min_over_class(&nine, &g, &GroupElement(vec![c as u64]), &lim).unwrap().unwrap();
            assert_eq!(r.min_square, Rat::new(BigInt::from(k2), BigInt::from(9)), "class {c}");
        }
    }

    #[test]
    fn empty_constraint_set_is_reported() {
        // <4>: characteristic covectors have dual coordinate ≡ 0 mod 2, so they
        // project to {0, 2}; the class 1 is never hit
        let lim = Limits::default();
        let four = lat(IntMatrix::from_i64(&[vec![4]]));
        let g = disc_group(&four).unwrap();
        assert!(char_min_over_class(&four, &g, &GroupElement(vec![1]), &lim).unwrap().is_none());
        let r = char_min_over_class(&four, &g, &GroupElement(vec![0]), &lim).unwrap().unwrap();
        assert_eq!(r.min_square, int(0));
    }
}
