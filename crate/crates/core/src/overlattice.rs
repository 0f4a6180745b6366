//! Lattices squeezed between `L` and `L*`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::discform::{DiscGroup, Subgroup};
use crate::error::{Error, Result};
use crate::exactmat::{self, RatMatrix};
use crate::lattice::{make_lattice, Lattice};
use crate::rational::{self, Rat};

/// A full-rank lattice `L'` with `L ⊆ L'`, basis rows in `L`-coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct OverLattice {
    pub basis: RatMatrix,
    pub gram: RatMatrix,
    /// `[L' : L]`
    pub index: BigInt,
}

impl OverLattice {
    fn from_generators(l: &Lattice, generators: &RatMatrix) -> OverLattice {
        let basis = canonical_basis(generators, l.rank());
        let gram = &(&basis * &l.gram_rat()) * &basis.transpose();
        let vol = exactmat::det_rat(&basis).abs();
        let index = vol.recip();
        assert!(rational::is_integer(&index), "basis does not span an overlattice of L");
        OverLattice { basis, gram, index: index.to_integer() }
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_integral(&self) -> bool {
        self.gram.to_int().is_some()
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_integral() && exactmat::det_rat(&self.gram).abs().is_one()
    }

    /// `|det gram|`, which is `[L'* : L']` when `L'` is integral.
    pub fn discriminant(&self) -> Rat {
        exactmat::det_rat(&self.gram).abs()
    }

    /// `L'` as a lattice in its own basis.
    pub fn to_lattice(&self) -> Result<Lattice> {
        make_lattice(self.gram.to_int().ok_or(Error::NotIntegral)?)
    }

    /// Converts coordinates in the basis of `L'` to `L`-coordinates.
    pub fn to_l_coords(&self, v: &[Rat]) -> Vec<Rat> {
        exactmat::row_times(v, &self.basis)
    }
}

/// HNF basis of the lattice spanned by the rows of `gens` (denominators cleared
/// first, then restored), keeping the `rank` nonzero rows.
pub fn canonical_basis(gens: &RatMatrix, rank: usize) -> RatMatrix {
    let scale = gens.denominator_lcm();
    let ints = gens.scale(&Rat::from_integer(scale.clone())).to_int().expect("denominators cleared");
    let (h, _) = exactmat::hnf(&ints);
    let nonzero: Vec<usize> = (0..h.rows()).filter(|&i| h.row(i).iter().any(|x| !x.is_zero())).collect();
    assert_eq!(nonzero.len(), rank, "generators do not span a full-rank lattice");
    h.select_rows(&nonzero).to_rat().scale(&Rat::new(BigInt::one(), scale))
}

/// `π⁻¹(H)`, generated by `L` together with lifts of the generators of `H`.
pub fn overlattice(l: &Lattice, g: &DiscGroup, h: &Subgroup) -> Result<OverLattice> {
    let mut gens = RatMatrix::identity(l.rank());
    for x in &h.generators {
        let lift = g.lift(x)?;
        gens = gens.vstack(&RatMatrix::from_rows(&[lift.0]));
    }
    let u = OverLattice::from_generators(l, &gens);
    debug_assert_eq!(u.index, BigInt::from(h.order()));
    Ok(u)
}

/// The dual `(L')*`, again as an overlattice of `L`.
pub fn dual_of(l: &Lattice, u: &OverLattice) -> Result<OverLattice> {
    if !u.is_integral() {
        return Err(Error::NotIntegral);
    }
    // rows of gram⁻¹·basis pair with the basis of L' to the identity
    let dual = &exactmat::inverse_rat(&u.gram)? * &u.basis;
    Ok(OverLattice::from_generators(l, &dual))
}

/// `([L' : L], [L* : (L')*])`.
pub fn index_check(l: &Lattice, u: &OverLattice) -> Result<(BigInt, BigInt)> {
    let dual = dual_of(l, u)?;
    let dual_vol = exactmat::det_rat(&dual.basis).abs();
    let dual_index = dual_vol * Rat::from_integer(l.discriminant());
    debug_assert!(rational::is_integer(&dual_index));
    Ok((u.index.clone(), dual_index.to_integer()))
}

/// Whether every row of `inner` lies in the lattice spanned by the rows of `outer`.
pub fn is_sublattice(inner: &RatMatrix, outer: &RatMatrix) -> bool {
    match exactmat::inverse_rat(outer) {
        Ok(inv) => (inner * &inv).to_int().is_some(),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discform::{disc_group, metabolizers, GroupElement, Limits};
    use crate::exactmat::IntMatrix;
    use crate::lattice::{a_gram, direct_sum, e8_gram};
    use crate::rational::{int, rat};

    fn lat(rows: &[Vec<i64>]) -> Lattice {
        make_lattice(IntMatrix::from_i64(rows)).unwrap()
    }

    #[test]
    fn trivial_subgroup_gives_l() {
        let l = lat(&[vec![2, 1], vec![1, 5]]);
        let g = disc_group(&l).unwrap();
        let u = overlattice(&l, &g, &g.span(&[])).unwrap();
        assert_eq!(u.index, BigInt::one());
        assert_eq!(u.gram, l.gram_rat());
        assert!(u.is_integral());
        assert_eq!(index_check(&l, &u).unwrap(), (BigInt::one(), BigInt::one()));
        let d = dual_of(&l, &u).unwrap();
        assert_eq!(d.index, l.discriminant());
    }

    #[test]
    fn nine_overlattice_is_z() {
        let l = lat(&[vec![9]]);
        let g = disc_group(&l).unwrap();
        let m = g.span(&[GroupElement(vec![3])]);
        let u = overlattice(&l, &g, &m).unwrap();
        assert_eq!(u.index, BigInt::from(3));
        assert_eq!(u.basis[(0, 0)], rat(1, 3));
        assert_eq!(u.gram[(0, 0)], int(1));
        assert!(u.is_unimodular());
        assert_eq!(dual_of(&l, &u).unwrap(), u);
        assert_eq!(index_check(&l, &u).unwrap(), (BigInt::from(3), BigInt::from(3)));
    }

    #[test]
    fn one_plus_a8_overlattice_is_odd_unimodular() {
        let l = make_lattice(direct_sum(&IntMatrix::identity(1), &a_gram(8))).unwrap();
        let g = disc_group(&l).unwrap();
        let ms = metabolizers(&l, &Limits::default()).unwrap();
        assert_eq!(ms.len(), 1);
        let u = overlattice(&l, &g, &ms[0]).unwrap();
        assert_eq!(u.index, BigInt::from(3));
        assert!(u.is_unimodular());
        let ul = u.to_lattice().unwrap();
        assert!(ul.is_unimodular());
        assert!((0..9).any(|i| ul.gram()[(i, i)].bit(0)), "odd lattice");
    }

    #[test]
    fn unimodular_dual_is_itself() {
        let l = make_lattice(e8_gram()).unwrap();
        let g = disc_group(&l).unwrap();
        let u = overlattice(&l, &g, &g.span(&[])).unwrap();
        assert_eq!(dual_of(&l, &u).unwrap(), u);
    }

    #[test]
    fn intermediate_lattice_of_36() {
        let l = lat(&[vec![36]]);
        let g = disc_group(&l).unwrap();
        // the lift 1/2 of L-generator is 18/36, i.e. the element 18
        let h = g.span(&[GroupElement(vec![18])]);
        let u = overlattice(&l, &g, &h).unwrap();
        assert_eq!(u.gram[(0, 0)], int(9));
        assert_eq!(index_check(&l, &u).unwrap(), (BigInt::from(2), BigInt::from(2)));
        let d = dual_of(&l, &u).unwrap();
        assert!(is_sublattice(&RatMatrix::identity(1), &u.basis));
        assert!(is_sublattice(&u.basis, &d.basis));
        assert!(is_sublattice(&d.basis, l.inverse()));
        assert!(!is_sublattice(&d.basis, &u.basis));
    }

    #[test]
    fn non_isotropic_subgroup_is_not_integral() {
        let l = lat(&[vec![9]]);
        let g = disc_group(&l).unwrap();
        let all = g.span(&[GroupElement(vec![1])]);
        let u = overlattice(&l, &g, &all).unwrap();
        assert!(!u.is_integral());
        assert_eq!(dual_of(&l, &u), Err(Error::NotIntegral));
        assert_eq!(index_check(&l, &u), Err(Error::NotIntegral));
    }
}
