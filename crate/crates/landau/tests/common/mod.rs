#![allow(dead_code)]

use landau::geometry::{join_points, Line, Point};
use landau::scalars::{rat, ExactRational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_rat(r: &mut ChaCha8Rng) -> ExactRational {
    rat(r.gen_range(-9..=9), r.gen_range(1..=4))
}

pub fn rand_point(r: &mut ChaCha8Rng) -> Point<ExactRational> {
    loop {
        let p = Point::new(std::array::from_fn(|_| rand_rat(r)));
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn rand_line(r: &mut ChaCha8Rng) -> Line<ExactRational> {
    loop {
        let l = join_points(&rand_point(r), &rand_point(r));
        if !l.is_zero() {
            return l;
        }
    }
}

pub fn rand_point_f64(r: &mut ChaCha8Rng) -> Point<f64> {
    Point::new(std::array::from_fn(|_| r.gen_range(-1.0..1.0)))
}

pub fn rand_line_f64(r: &mut ChaCha8Rng) -> Line<f64> {
    join_points(&rand_point_f64(r), &rand_point_f64(r))
}

pub fn rand_line_c64(r: &mut ChaCha8Rng) -> Line<num_complex::Complex64> {
    use num_complex::Complex64;
    let mut pt = || Point::new(std::array::from_fn(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))));
    let a = pt();
    let b = pt();
    join_points(&a, &b)
}

pub fn to_c64(m: &[Line<ExactRational>]) -> Vec<Line<num_complex::Complex64>> {
    use landau::scalars::ToComplex;
    m.iter().map(|l| l.map(|c| c.to_c64())).collect()
}
