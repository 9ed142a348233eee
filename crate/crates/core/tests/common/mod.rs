#![allow(dead_code)]

use std::f64::consts::PI;

use tritronquee::bsb::{solve_bsb, solve_period_targets, BsbConfig, BsbSolution, QuantumPair};
use tritronquee::{Complex, Potential};

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn primitive_11() -> BsbSolution {
    solve_bsb(QuantumPair::new(1, 1).unwrap(), None, &BsbConfig::default()).unwrap()
}

/// A point where `χ₂ = iπs` and `χ₋₂ = iπt`, reached by continuation from
/// the (1,1) solution. Such points carry the "320" Stokes graph.
pub fn boutroux_point(s: f64, t: f64) -> Potential {
    let cfg = BsbConfig::default();
    let mut x = primitive_11().point;
    let steps = 12;
    for j in 1..=steps {
        let f = j as f64 / steps as f64;
        let target = [c(0.0, PI * (1.0 + (s - 1.0) * f)), c(0.0, PI * (1.0 + (t - 1.0) * f))];
        x = solve_period_targets(target, x, &cfg).unwrap().0;
    }
    x
}

/// Roots of `4λ³ − 2aλ − 28b` by Durand–Kerner iteration.
pub fn durand_kerner(pot: &Potential) -> [Complex; 3] {
    let f = |z: Complex| z * z * z - pot.a / 2.0 * z - 7.0 * pot.b;
    let seed = c(0.4, 0.9);
    let mut r = [seed, seed * seed, seed * seed * seed];
    for _ in 0..500 {
        for i in 0..3 {
            let mut den = c(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    den *= r[i] - r[j];
                }
            }
            r[i] -= f(r[i]) / den;
        }
    }
    r
}

/// Continues `√V` stepwise along the polygon `path`, starting from `w0`.
pub fn continue_sqrt(pot: &Potential, path: &[Complex], w0: Complex, steps_per_leg: usize) -> Complex {
    let mut w = w0;
    for leg in path.windows(2) {
        for j in 1..=steps_per_leg {
            let z = leg[0] + (leg[1] - leg[0]) * (j as f64 / steps_per_leg as f64);
            let cand = pot.eval(z).sqrt();
            w = if (cand - w).norm() <= (cand + w).norm() { cand } else { -cand };
        }
    }
    w
}
