//! Exact minimization of a positive definite quadratic form over a coset
//! `offset + step·Zⁿ`.
//!
//! The form is factored as `L·diag(D)·Lᵀ` and coordinates are fixed from the
//! last one down. At each level the admissible values are visited outward from
//! the one nearest the conditional center, and a branch is cut as soon as its
//! partial norm reaches the incumbent. All arithmetic is exact.

use num_traits::{Signed, Zero};

use crate::error::Result;
use crate::exactmat::{self, Ldl, RatMatrix};
use crate::rational::{self, Rat};

#[derive(Clone, Debug, PartialEq)]
pub struct CosetMinimum {
    pub norm: Rat,
    /// Minimizer, in the coordinates of the form.
    pub point: Vec<Rat>,
    pub nodes: u64,
}

pub struct CosetSearch {
    ldl: Ldl,
}

struct Walk<'a> {
    ldl: &'a Ldl,
    offset: &'a [Rat],
    step: &'a Rat,
    point: Vec<Rat>,
    best: Option<Rat>,
    best_point: Option<Vec<Rat>>,
    nodes: u64,
}

impl CosetSearch {
    /// Fails with `NotPositiveDefinite` unless `gram` is positive definite.
    pub fn new(gram: &RatMatrix) -> Result<CosetSearch> {
        Ok(CosetSearch { ldl: exactmat::rational_cholesky(gram)? })
    }

    pub fn dim(&self) -> usize {
        self.ldl.pivots.len()
    }

    fn center(ldl: &Ldl, point: &[Rat], i: usize) -> Rat {
        let n = point.len();
        let mut c = Rat::zero();
        for j in i + 1..n {
            let lji = &ldl.lower[(j, i)];
            if !lji.is_zero() {
                c -= lji * &point[j];
            }
        }
        c
    }

    /// Coordinate-wise nearest rounding from the last coordinate down.
    pub fn greedy(&self, offset: &[Rat], step: &Rat) -> (Rat, Vec<Rat>) {
        let n = self.dim();
        let mut point = vec![Rat::zero(); n];
        let mut norm = Rat::zero();
        for i in (0..n).rev() {
            let c = Self::center(&self.ldl, &point, i);
            let x = rational::round_half_up(&((&c - &offset[i]) / step));
            point[i] = &offset[i] + step * Rat::from_integer(x);
            let dev = &point[i] - &c;
            norm += &self.ldl.pivots[i] * &dev * &dev;
        }
        (norm, point)
    }

    /// The minimum over the coset, provided it is strictly below `bound`.
    ///
    /// With `bound = None` the greedy point seeds the incumbent, so a result is
    /// always returned.
    pub fn minimize(&self, offset: &[Rat], step: &Rat, bound: Option<&Rat>) -> Option<CosetMinimum> {
        assert_eq!(offset.len(), self.dim());
        assert!(step.is_positive());
        let (gnorm, gpoint) = self.greedy(offset, step);
        let (best, best_point) = match bound {
            Some(b) if *b <= gnorm => (Some(b.clone()), None),
            _ => (Some(gnorm), Some(gpoint)),
        };
        let mut walk = Walk {
            ldl: &self.ldl,
            offset,
            step,
            point: vec![Rat::zero(); self.dim()],
            best,
            best_point,
            nodes: 0,
        };
        if self.dim() > 0 {
            walk.descend(self.dim() - 1, &Rat::zero());
        }
        let nodes = walk.nodes;
        match (walk.best, walk.best_point) {
            (Some(norm), Some(point)) => Some(CosetMinimum { norm, point, nodes }),
            _ => None,
        }
    }
}

impl Walk<'_> {
    fn try_value(&mut self, i: usize, x: &Rat, center: &Rat, partial: &Rat) -> bool {
        let w = &self.offset[i] + self.step * x;
        let dev = &w - center;
        let total = partial + &self.ldl.pivots[i] * &dev * &dev;
        if let Some(b) = &self.best {
            if &total >= b {
                return false;
            }
        }
        self.nodes += 1;
        self.point[i] = w;
        if i == 0 {
            self.best = Some(total);
            self.best_point = Some(self.point.clone());
        } else {
            self.descend(i - 1, &total);
        }
        true
    }

    fn descend(&mut self, i: usize, partial: &Rat) {
        let center = CosetSearch::center(self.ldl, &self.point, i);
        let x0 = Rat::from_integer(rational::round_half_up(&((&center - &self.offset[i]) / self.step)));
        let one = Rat::from_integer(1.into());
        let mut up = x0.clone();
        let mut down = &x0 - &one;
        let (mut up_open, mut down_open) = (true, true);
        // visit values in order of increasing distance from the center
        while up_open || down_open {
            let take_up = match (up_open, down_open) {
                (true, false) => true,
                (false, true) => false,
                _ => {
                    let du = (&self.offset[i] + self.step * &up - &center).abs();
                    let dd = (&self.offset[i] + self.step * &down - &center).abs();
                    du <= dd
                }
            };
            if take_up {
                up_open = self.try_value(i, &up.clone(), &center, partial);
                up += &one;
            } else {
                down_open = self.try_value(i, &down.clone(), &center, partial);
                down -= &one;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::IntMatrix;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    /// Exhaustive scan over a box of integer multipliers.
    fn box_min(gram: &RatMatrix, offset: &[Rat], step: &Rat, radius: i64) -> Rat {
        let n = offset.len();
        let mut best: Option<Rat> = None;
        let mut x = vec![-radius; n];
        loop {
            let w: Vec<Rat> = (0..n).map(|i| &offset[i] + step * int(x[i])).collect();
            let v = exactmat::bilinear(gram, &w, &w);
            if best.as_ref().is_none_or(|b| &v < b) {
                best = Some(v);
            }
            let mut k = 0;
            while k < n && x[k] == radius {
                x[k] = -radius;
                k += 1;
            }
            if k == n {
                break;
            }
            x[k] += 1;
        }
        best.unwrap()
    }

    #[test]
    fn identity_with_odd_offsets() {
        let g = RatMatrix::identity(3);
        let s = CosetSearch::new(&g).unwrap();
        let r = s.minimize(&[int(1), int(1), int(1)], &int(2), None).unwrap();
        assert_eq!(r.norm, int(3));
        assert!(r.point.iter().all(|w| w.abs() == int(1)));
    }

    #[test]
    fn bound_excludes_worse_results() {
        let g = RatMatrix::identity(2);
        let s = CosetSearch::new(&g).unwrap();
        assert!(s.minimize(&[int(1), int(1)], &int(2), Some(&int(2))).is_none());
        assert_eq!(s.minimize(&[int(1), int(1)], &int(2), Some(&int(3))).unwrap().norm, int(2));
    }

    #[test]
    fn rank_one_dual_coset() {
        // L = <9>: L* has gram 1/9; odd dual coordinates are the characteristic covectors
        let g = RatMatrix::from_rows(&[vec![rat(1, 9)]]);
        let s = CosetSearch::new(&g).unwrap();
        assert_eq!(s.minimize(&[int(1)], &int(2), None).unwrap().norm, rat(1, 9));
        assert_eq!(s.minimize(&[int(9)], &int(18), None).unwrap().norm, int(9));
    }

    fn pd_gram() -> impl Strategy<Value = IntMatrix> {
        (1usize..=3).prop_flat_map(|n| {
            proptest::collection::vec(-3i64..=3, n * n).prop_map(move |v| {
                let b = IntMatrix::new(n, n, v.into_iter().map(Into::into).collect());
                let mut g = &b * &b.transpose();
                for i in 0..n {
                    g[(i, i)] += 1;
                }
                g
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn matches_box_scan(g in pd_gram(), offs in proptest::collection::vec(-6i64..=6, 3), den in 1i64..=3) {
            let n = g.rows();
            let gram = g.to_rat();
            let offset: Vec<Rat> = offs[..n].iter().map(|&o| rat(o, den)).collect();
            let s = CosetSearch::new(&gram).unwrap();
            let r = s.minimize(&offset, &int(2), None).unwrap();
            prop_assert_eq!(exactmat::bilinear(&gram, &r.point, &r.point), r.norm.clone());
            // points are admissible
            for (w, o) in r.point.iter().zip(&offset) {
                prop_assert!(rational::is_integer(&((w - o) / int(2))));
            }
            prop_assert_eq!(r.norm, box_min(&gram, &offset, &int(2), 10));
        }
    }
}
