use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::ineq::Scalar;

fn det3<T: Scalar>(m: &[[Ratio<T>; 3]; 3]) -> Ratio<T> {
    let minor = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        &m[rows[0]][cols[0]] * &m[rows[1]][cols[1]] - &m[rows[0]][cols[1]] * &m[rows[1]][cols[0]]
    };
    (0..3).fold(Ratio::zero(), |acc, c| {
        let term = &m[0][c] * minor(0, c);
        if c % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// Determinant of the conic `[[0,1,δ],[1,0,δ−1],[δ,δ−1,2δ²]]`; it equals `−2δ`.
pub fn conic_discriminant<T: Scalar>(delta: &Ratio<T>) -> Result<Ratio<T>> {
    if delta <= &Ratio::zero() || delta >= &Ratio::one() {
        return Err(Error::Invalid(format!("delta must lie strictly between 0 and 1, got {delta}")));
    }
    Ok(conic_determinant(delta))
}

/// The same determinant without the range check.
pub fn conic_determinant<T: Scalar>(delta: &Ratio<T>) -> Ratio<T> {
    let d = delta.clone();
    let one = Ratio::<T>::one();
    let two = &one + &one;
    let m = [
        [Ratio::zero(), one.clone(), d.clone()],
        [one.clone(), Ratio::zero(), &d - &one],
        [d.clone(), &d - &one, two * &d * &d],
    ];
    det3(&m)
}
