use std::f64::consts::PI;

use num_complex::Complex64;

use crate::array::{fourier_column, Asf, Carrier, HermitianToeplitz, UlaModel};
use crate::error::{Error, Result};

pub const DEFAULT_UPSAMPLE: usize = 8;

/// Samples the triangular (piecewise-linear) interpolant of a grid ASF on a
/// grid refined `upsample` times, returning trapezoid masses `h * density`.
///
/// The interpolant is periodic on [-1, 1): the hat of the first grid point
/// wraps around to the right edge. The returned weights lie on the points
/// `-1 + j h`, `h = 2 / (G U)`, and sum to one.
pub fn interpolate_asf(asf: &Asf, upsample: usize) -> Result<Asf> {
    if upsample == 0 {
        return Err(Error::Config("upsample factor must be positive".into()));
    }
    let g = asf.grid_size();
    let w = asf.weights();
    let u = upsample as f64;
    let mut out = Vec::with_capacity(g * upsample);
    for i in 0..g {
        let (left, right) = (w[i], w[(i + 1) % g]);
        for s in 0..upsample {
            let t = s as f64 / u;
            out.push(((1.0 - t) * left + t * right) / u);
        }
    }
    Asf::normalized(out)
}

/// DL covariance of the triangular interpolant of `asf`, integrated by
/// trapezoid quadrature on the `upsample`-times refined grid.
pub fn reconstruct_dl(model: &UlaModel, asf: &Asf, upsample: usize) -> Result<HermitianToeplitz> {
    if asf.grid_size() != model.grid_size() {
        return Err(Error::shape(model.grid_size(), asf.grid_size()));
    }
    let fine = interpolate_asf(asf, upsample)?;
    let h = 2.0 / fine.grid_size() as f64;
    let scale = model.carrier_scale(Carrier::Downlink);
    let mut col = fourier_column(
        model.num_antennas(),
        scale,
        fine.weights().iter().enumerate().map(|(j, &wj)| (-1.0 + j as f64 * h, wj)),
    );
    // The node at xi = -1 carries half its mass at each edge of [-1, 1].
    // With beta != 1 the two edge phasors differ.
    let half_edge = 0.5 * fine.weights()[0];
    if half_edge != 0.0 {
        for (k, c) in col.iter_mut().enumerate().skip(1) {
            let phase = PI * scale * k as f64;
            *c += Complex64::from_polar(half_edge, phase) - Complex64::from_polar(half_edge, -phase);
        }
    }
    HermitianToeplitz::new(col)
}
