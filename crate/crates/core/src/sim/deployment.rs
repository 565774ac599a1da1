use rand::Rng;

use crate::sim::config::SimConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Base station at the origin, positions in metres.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    pub cus: Vec<Point>,
    /// `(d1, d2)` for each D2D pair.
    pub pairs: Vec<(Point, Point)>,
}

pub const BASE_STATION: Point = Point { x: 0.0, y: 0.0 };

/// Regular hexagon with circumradius `r` and two vertices on the x axis.
pub fn in_hexagon(p: &Point, r: f64) -> bool {
    let s3 = 3f64.sqrt();
    p.y.abs() <= 0.5 * s3 * r && s3 * p.x.abs() + p.y.abs() <= s3 * r
}

/// Uniform point in the hexagon by rejection from its bounding box.
pub fn sample_hexagon<R: Rng + ?Sized>(rng: &mut R, r: f64) -> Point {
    let half_h = 0.5 * 3f64.sqrt() * r;
    loop {
        let p = Point {
            x: rng.gen_range(-r..=r),
            y: rng.gen_range(-half_h..=half_h),
        };
        if in_hexagon(&p, r) {
            return p;
        }
    }
}

/// Uniform point in the disk of radius `d_max` around `center`, redrawn
/// until it lands inside the cell.
pub fn sample_partner<R: Rng + ?Sized>(rng: &mut R, center: &Point, d_max: f64, r: f64) -> Point {
    loop {
        let rho = d_max * rng.gen::<f64>().sqrt();
        let phi = rng.gen_range(0.0..std::f64::consts::TAU);
        let p = Point {
            x: center.x + rho * phi.cos(),
            y: center.y + rho * phi.sin(),
        };
        if in_hexagon(&p, r) {
            return p;
        }
    }
}

/// CUs first, then pairs. Deterministic in the state of `rng`.
pub fn generate_deployment<R: Rng + ?Sized>(config: &SimConfig, rng: &mut R) -> Deployment {
    let r = config.cell_radius_m;
    let cus = (0..config.k_users).map(|_| sample_hexagon(rng, r)).collect();
    let pairs = (0..config.d_pairs)
        .map(|_| {
            let d1 = sample_hexagon(rng, r);
            let d2 = sample_partner(rng, &d1, config.d_max_m, r);
            (d1, d2)
        })
        .collect();
    Deployment { cus, pairs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hexagon_membership() {
        assert!(in_hexagon(&Point { x: 299.9, y: 0.0 }, 300.0));
        assert!(!in_hexagon(&Point { x: 0.0, y: 260.0 }, 300.0));
        assert!(in_hexagon(&Point { x: 0.0, y: 259.0 }, 300.0));
        assert!(!in_hexagon(&Point { x: 250.0, y: 200.0 }, 300.0));
    }

    #[test]
    fn zero_dmax_colocates() {
        let c = SimConfig {
            d_max_m: 0.0,
            ..SimConfig::default()
        };
        let d = generate_deployment(&c, &mut ChaCha8Rng::seed_from_u64(3));
        for (a, b) in &d.pairs {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn repeatable_and_within_bounds() {
        let c = SimConfig::default();
        let a = generate_deployment(&c, &mut ChaCha8Rng::seed_from_u64(9));
        let b = generate_deployment(&c, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert_eq!(a.cus.len(), c.k_users);
        assert_eq!(a.pairs.len(), c.d_pairs);
        for (p, q) in &a.pairs {
            assert!(in_hexagon(p, 300.0) && in_hexagon(q, 300.0));
            assert!(p.distance(q) <= c.d_max_m);
        }
    }
}
