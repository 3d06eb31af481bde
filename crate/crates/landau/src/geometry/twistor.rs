//! Dual (region) coordinates to momentum-twistor lines.

use super::extensor::{join_points, Line, Point};
use crate::scalars::{ExactRational, GaussianRational};
use num_complex::Complex;
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub struct DualPoint4 {
    pub x: [ExactRational; 4],
}

/// Line spanned by the rows of `[[1, 0, x0+x3, x1−i·x2], [0, 1, x1+i·x2, x0−x3]]`.
///
/// Pairings of such lines are Lorentzian squares:
/// `⟨L(x) L(y)⟩ = (x0−y0)² − (x1−y1)² − (x2−y2)² − (x3−y3)²`.
pub fn twistor_from_dual_point(p: &DualPoint4) -> Line<GaussianRational> {
    let [x0, x1, x2, x3] = &p.x;
    let z = ExactRational::zero;
    let re = |q: ExactRational| Complex::new(q, z());
    let one = re(ExactRational::from_integer(1.into()));
    let zero = re(z());
    let a = Point::new([one.clone(), zero.clone(), re(x0 + x3), Complex::new(x1.clone(), -x2.clone())]);
    let b = Point::new([zero, one, Complex::new(x1.clone(), x2.clone()), re(x0 - x3)]);
    join_points(&a, &b)
}
