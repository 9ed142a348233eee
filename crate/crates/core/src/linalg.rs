use crate::Complex;

/// Solves the 2×2 system `m · x = rhs`; `None` when the matrix is singular.
pub(crate) fn solve2(m: [[Complex; 2]; 2], rhs: [Complex; 2]) -> Option<[Complex; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    if !(det.norm() > 1e-300 && det.norm() > f64::EPSILON * scale * scale * 1e-6) {
        return None;
    }
    let x0 = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det;
    let x1 = (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det;
    Some([x0, x1])
}

pub(crate) fn norm2(v: [Complex; 2]) -> f64 {
    libm::hypot(v[0].norm(), v[1].norm())
}
