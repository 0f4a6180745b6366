//! Definite integral lattices, their duals and characteristic covectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{self, IntMatrix, RatMatrix};
use crate::rational::{self, Rat};

/// Whether the stored Gram matrix is the input or its negation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    AsGiven,
    Negated,
}

/// A positive definite integral lattice, given by its Gram matrix in a fixed basis.
///
/// Negative definite input is negated on construction and the fact is kept in
/// [`Lattice::orientation`].
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    gram: IntMatrix,
    orientation: Orientation,
    inverse: RatMatrix,
    det: BigInt,
}

/// A vector of `L ⊗ Q`, in coordinates with respect to the basis of `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DualVector(#[serde(with = "rational::serde_rat::vec")] pub Vec<Rat>);

impl DualVector {
    pub fn zero(n: usize) -> Self {
        DualVector(vec![Rat::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        DualVector(v.iter().map(|&x| rational::int(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &DualVector) -> DualVector {
        DualVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: &Rat) -> DualVector {
        DualVector(self.0.iter().map(|a| a * k).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(rational::is_integer)
    }
}

/// The coset `base + 2Λ`, with `Λ` given by basis rows in `L`-coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct CharCoset {
    pub base: DualVector,
    pub sublattice: RatMatrix,
}

impl Lattice {
    pub fn new(gram: IntMatrix) -> Result<Lattice> {
        make_lattice(gram)
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn gram_rat(&self) -> RatMatrix {
        self.gram.to_rat()
    }

    /// Gram matrix of `L*` in the dual basis.
    pub fn inverse(&self) -> &RatMatrix {
        &self.inverse
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn discriminant(&self) -> BigInt {
        self.det.abs()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det.abs().is_one()
    }

    /// Pairing of `x` and `y` under the (rational extension of the) form.
    pub fn pairing(&self, x: &DualVector, y: &DualVector) -> Rat {
        let g = &self.gram;
        let mut acc = Rat::zero();
        for i in 0..self.rank() {
            if x.0[i].is_zero() {
                continue;
            }
            let gy: Rat = (0..self.rank()).map(|j| &y.0[j] * &g[(i, j)]).sum();
            acc += &x.0[i] * gy;
        }
        acc
    }

    pub fn norm(&self, x: &DualVector) -> Rat {
        self.pairing(x, x)
    }

    /// Pairings of `x` with the basis of `L`; integral exactly when `x ∈ L*`.
    pub fn dual_coords(&self, x: &DualVector) -> Vec<Rat> {
        (0..self.rank())
            .map(|i| (0..self.rank()).map(|j| &x.0[j] * &self.gram[(i, j)]).sum())
            .collect()
    }

    pub fn in_dual(&self, x: &DualVector) -> bool {
        self.dual_coords(x).iter().all(rational::is_integer)
    }

    /// The dual vector whose pairings with the basis of `L` are `u`.
    pub fn from_dual_coords(&self, u: &[Rat]) -> DualVector {
        DualVector(exactmat::times_col(&self.inverse, u))
    }
}

pub fn make_lattice(gram: IntMatrix) -> Result<Lattice> {
    if gram.rows() == 0 {
        return Err(Error::EmptyLattice);
    }
    if !gram.is_symmetric() {
        return Err(Error::NotSymmetric(format!("{}x{} Gram matrix", gram.rows(), gram.cols())));
    }
    let det = exactmat::det(&gram);
    if det.is_zero() {
        return Err(Error::SingularForm);
    }
    let (gram, orientation, det) = if exactmat::rational_cholesky(&gram.to_rat()).is_ok() {
        (gram, Orientation::AsGiven, det)
    } else {
        let neg = gram.neg();
        if exactmat::rational_cholesky(&neg.to_rat()).is_err() {
            return Err(Error::IndefiniteForm);
        }
        let det = if neg.rows().is_multiple_of(2) { det } else { -det };
        (neg, Orientation::Negated, det)
    };
    let inverse = exactmat::inverse(&gram)?;
    Ok(Lattice { gram, orientation, inverse, det })
}

pub fn discriminant(l: &Lattice) -> BigInt {
    l.discriminant()
}

pub fn is_characteristic(l: &Lattice, chi: &DualVector) -> Result<bool> {
    let u = l.dual_coords(chi);
    if !u.iter().all(rational::is_integer) {
        return Err(Error::NotInDualLattice);
    }
    Ok(u.iter().enumerate().all(|(i, ui)| (ui.to_integer() - &l.gram[(i, i)]).is_even()))
}

/// `Char(L) = base + 2L*`, with `base` the covector whose pairing with each
/// basis vector is the parity of that vector's square.
pub fn characteristic_base(l: &Lattice) -> CharCoset {
    let parities: Vec<Rat> =
        (0..l.rank()).map(|i| Rat::from_integer(l.gram[(i, i)].mod_floor(&BigInt::from(2)))).collect();
    CharCoset { base: l.from_dual_coords(&parities), sublattice: l.inverse.clone() }
}

#[derive(Deserialize)]
struct LatticeFile {
    gram: Vec<Vec<serde_json::Value>>,
}

fn json_int(v: &serde_json::Value) -> Result<BigInt> {
    let bad = || Error::Parse(format!("Gram entry {v} is not an integer"));
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(bad())
            }
        }
        serde_json::Value::String(s) => s.trim().parse().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

/// Parses `{"gram": [[...], ...]}`; entries are JSON integers or decimal strings.
pub fn parse_gram_json(text: &str) -> Result<IntMatrix> {
    let file: LatticeFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("lattice file: {e}")))?;
    let n = file.gram.len();
    if n == 0 {
        return Err(Error::EmptyLattice);
    }
    let mut rows = Vec::with_capacity(n);
    for row in &file.gram {
        if row.len() != n {
            return Err(Error::NotSymmetric("Gram matrix is not square".into()));
        }
        rows.push(row.iter().map(json_int).collect::<Result<Vec<_>>>()?);
    }
    let g = IntMatrix::from_rows(&rows);
    if !g.is_symmetric() {
        return Err(Error::NotSymmetric("Gram matrix is not symmetric".into()));
    }
    Ok(g)
}

// -- a few named Gram matrices -- //

pub fn standard_gram(n: usize) -> IntMatrix {
    IntMatrix::identity(n)
}

/// Root lattice `A_n` (tridiagonal 2 / -1).
pub fn a_gram(n: usize) -> IntMatrix {
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = BigInt::from(2);
        if i + 1 < n {
            g[(i, i + 1)] = BigInt::from(-1);
            g[(i + 1, i)] = BigInt::from(-1);
        }
    }
    g
}

/// Root lattice `D_n`, `n >= 4`.
pub fn d_gram(n: usize) -> IntMatrix {
    assert!(n >= 4);
    let mut g = a_gram(n);
    // branch the last node off the third-to-last
    g[(n - 2, n - 1)] = BigInt::zero();
    g[(n - 1, n - 2)] = BigInt::zero();
    g[(n - 3, n - 1)] = BigInt::from(-1);
    g[(n - 1, n - 3)] = BigInt::from(-1);
    g
}

/// The even unimodular root lattice `E_8`.
pub fn e8_gram() -> IntMatrix {
    // chain 0-1-2-3-4-5-6 with node 7 attached to node 4
    let mut g = IntMatrix::zeros(8, 8);
    for i in 0..8 {
        g[(i, i)] = BigInt::from(2);
    }
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    for (a, b) in edges {
        g[(a, b)] = BigInt::from(-1);
        g[(b, a)] = BigInt::from(-1);
    }
    g
}

pub fn direct_sum(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.rows() + b.rows();
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            g[(i, j)] = a[(i, j)].clone();
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            g[(a.rows() + i, a.rows() + j)] = b[(i, j)].clone();
        }
    }
    g
}

/// The negative definite 9×9 form `⟨-1⟩ ⊕ -A_8`.
pub fn negative_one_plus_a8_gram() -> IntMatrix {
    direct_sum(&IntMatrix::from_i64(&[vec![1]]), &a_gram(8)).neg()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn negative_definite_input_is_negated() {
        let l = make_lattice(negative_one_plus_a8_gram()).unwrap();
        assert_eq!(l.orientation(), Orientation::Negated);
        assert_eq!(l.gram(), &direct_sum(&IntMatrix::identity(1), &a_gram(8)));
        assert_eq!(l.discriminant(), BigInt::from(9));

        let l = make_lattice(IntMatrix::identity(3)).unwrap();
        assert_eq!(l.orientation(), Orientation::AsGiven);
        assert_eq!(l.discriminant(), BigInt::one());
        assert!(l.is_unimodular());
    }

    #[test]
    fn rejects_bad_forms() {
        let hyperbolic = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(make_lattice(hyperbolic), Err(Error::IndefiniteForm));
        let singular = IntMatrix::from_i64(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(make_lattice(singular), Err(Error::SingularForm));
        let asym = IntMatrix::from_i64(&[vec![2, 1], vec![0, 2]]);
        assert!(matches!(make_lattice(asym), Err(Error::NotSymmetric(_))));
        assert_eq!(make_lattice(IntMatrix::zeros(0, 0)), Err(Error::EmptyLattice));
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&make_lattice(IntMatrix::from_i64(&[vec![9]])).unwrap()), BigInt::from(9));
        assert_eq!(discriminant(&make_lattice(IntMatrix::identity(4)).unwrap()), BigInt::one());
        assert_eq!(discriminant(&make_lattice(e8_gram()).unwrap()), BigInt::one());
        assert_eq!(discriminant(&make_lattice(d_gram(4)).unwrap()), BigInt::from(4));
    }

    #[test]
    fn characteristic_examples() {
        let z2 = make_lattice(IntMatrix::identity(2)).unwrap();
        assert!(is_characteristic(&z2, &DualVector::from_ints(&[1, 1])).unwrap());
        assert!(!is_characteristic(&z2, &DualVector::from_ints(&[0, 1])).unwrap());

        let nine = make_lattice(IntMatrix::from_i64(&[vec![9]])).unwrap();
        for k in -9..=9 {
            let chi = DualVector(vec![rat(k, 9)]);
            assert_eq!(is_characteristic(&nine, &chi).unwrap(), k % 2 != 0, "k = {k}");
        }
        assert_eq!(is_characteristic(&nine, &DualVector(vec![rat(1, 18)])), Err(Error::NotInDualLattice));
    }

    #[test]
    fn characteristic_bases() {
        let z4 = make_lattice(IntMatrix::identity(4)).unwrap();
        assert_eq!(characteristic_base(&z4).base, DualVector::from_ints(&[1, 1, 1, 1]));
        let e8 = make_lattice(e8_gram()).unwrap();
        assert_eq!(characteristic_base(&e8).base, DualVector::zero(8));
        let nine = make_lattice(IntMatrix::from_i64(&[vec![9]])).unwrap();
        assert_eq!(characteristic_base(&nine).base, DualVector(vec![rat(1, 9)]));
    }

    #[test]
    fn char_coset_closed_under_twice_dual() {
        let l = make_lattice(IntMatrix::from_i64(&[vec![3, 1, 0], vec![1, 4, 1], vec![0, 1, 5]])).unwrap();
        let coset = characteristic_base(&l);
        assert!(is_characteristic(&l, &coset.base).unwrap());
        for row in coset.sublattice.row_vecs() {
            let v = DualVector(row.to_vec());
            assert!(l.in_dual(&v));
            let shifted = coset.base.add(&v.scale(&int(2)));
            assert!(is_characteristic(&l, &shifted).unwrap());
            let not_char = coset.base.add(&v);
            assert!(!is_characteristic(&l, &not_char).unwrap());
        }
    }

    #[test]
    fn unimodular_char_base_is_a_vector() {
        for g in [IntMatrix::identity(3), e8_gram(), direct_sum(&IntMatrix::identity(1), &e8_gram())] {
            let l = make_lattice(g).unwrap();
            assert!(characteristic_base(&l).base.is_integral());
        }
    }

    #[test]
    fn parses_lattice_files() {
        let g = parse_gram_json(r#"{"gram": [[2, 1], [1, "3"]]}"#).unwrap();
        assert_eq!(g, IntMatrix::from_i64(&[vec![2, 1], vec![1, 3]]));
        assert!(matches!(parse_gram_json(r#"{"gram": [[2, 1], [0, 3]]}"#), Err(Error::NotSymmetric(_))));
        assert!(matches!(parse_gram_json(r#"{"gram": [[2.5]]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_gram_json(r#"{"gram": [[1, 2]]}"#), Err(Error::NotSymmetric(_))));
    }
}
