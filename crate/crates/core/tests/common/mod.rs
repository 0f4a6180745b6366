#![allow(dead_code)]

use latcorr::exactmat::{self, IntMatrix};
use latcorr::lattice::{make_lattice, Lattice};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn lat(g: IntMatrix) -> Lattice {
    make_lattice(g).unwrap()
}

/// Product of random elementary integer row operations.
pub fn random_unimodular(n: usize, steps: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut p = IntMatrix::identity(n);
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        match rng.gen_range(0..5) {
            0 => {
                let j = rng.gen_range(0..n);
                for k in 0..n {
                    let t = p[(i, k)].clone();
                    p[(i, k)] = p[(j, k)].clone();
                    p[(j, k)] = t;
                }
            }
            1 => {
                for k in 0..n {
                    p[(i, k)] = -p[(i, k)].clone();
                }
            }
            _ if n > 1 => {
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let c = if rng.gen_bool(0.5) { 1 } else { -1 };
                for k in 0..n {
                    let add = &p[(j, k)] * BigInt::from(c);
                    p[(i, k)] += add;
                }
            }
            _ => {}
        }
    }
    assert_eq!(exactmat::det(&p).abs(), BigInt::from(1));
    p
}

/// `P·G·Pᵀ`
pub fn change_basis(g: &IntMatrix, p: &IntMatrix) -> IntMatrix {
    &(p * g) * &p.transpose()
}

/// Random positive definite Gram matrix of rank `1..=max_rank` and
/// discriminant at most `max_disc`, diagonal entries at most 9.
///
/// Two draws in three are forced to a square discriminant above 1 so that
/// nontrivial metabolizers exist.
pub fn random_pd(rng: &mut ChaCha8Rng, max_rank: usize, max_disc: i64) -> IntMatrix {
    let squares: Vec<i64> = (2..).map(|r: i64| r * r).take_while(|&s| s <= max_disc).collect();
    let target = (!squares.is_empty() && rng.gen_ratio(2, 3)).then(|| squares[rng.gen_range(0..squares.len())]);
    loop {
        let n = rng.gen_range(1..=max_rank);
        let mut g = IntMatrix::zeros(n, n);
        for i in 0..n {
            g[(i, i)] = BigInt::from(rng.gen_range(1..=9));
            for j in 0..i {
                let v = BigInt::from(rng.gen_range(-2..=2));
                g[(i, j)] = v.clone();
                g[(j, i)] = v;
            }
        }
        let d = exactmat::det(&g).to_i64().unwrap();
        if d <= 0 || d > max_disc || target.is_some_and(|t| t != d) {
            continue;
        }
        if exactmat::rational_cholesky(&g.to_rat()).is_err() {
            continue;
        }
        return g;
    }
}
