use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CVector;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub const DEFAULT_F_UL: f64 = 1950e6;
pub const DEFAULT_F_DL: f64 = 2140e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Carrier {
    Uplink,
    Downlink,
}

/// Uniform linear array with half-wavelength spacing at the uplink carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UlaModel {
    num_antennas: usize,
    grid_size: usize,
    f_ul: f64,
    f_dl: f64,
}

impl UlaModel {
    pub fn new(num_antennas: usize, grid_size: usize, f_ul: f64, f_dl: f64) -> Result<Self> {
        if num_antennas == 0 {
            return Err(Error::InvalidModel("need at least one antenna".into()));
        }
        if grid_size < 2 * num_antennas {
            return Err(Error::InvalidModel(format!(
                "grid size {grid_size} must be at least twice the antenna count {num_antennas}"
            )));
        }
        if !(f_ul.is_finite() && f_ul > 0.0 && f_dl.is_finite() && f_dl > 0.0) {
            return Err(Error::InvalidModel(format!("bad carriers {f_ul} / {f_dl}")));
        }
        Ok(Self { num_antennas, grid_size, f_ul, f_dl })
    }

    /// Model at the default IMT-FDD carriers (1950 MHz UL, 2140 MHz DL).
    pub fn with_default_carriers(num_antennas: usize, grid_size: usize) -> Result<Self> {
        Self::new(num_antennas, grid_size, DEFAULT_F_UL, DEFAULT_F_DL)
    }

    pub fn num_antennas(&self) -> usize {
        self.num_antennas
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn f_ul(&self) -> f64 {
        self.f_ul
    }

    pub fn f_dl(&self) -> f64 {
        self.f_dl
    }

    /// DL/UL carrier ratio.
    pub fn beta(&self) -> f64 {
        self.f_dl / self.f_ul
    }

    /// Antenna spacing: half the UL wavelength.
    pub fn antenna_spacing(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.f_ul)
    }

    /// Phase scaling of the steering vector on `carrier` (1 on UL, beta on DL).
    pub fn carrier_scale(&self, carrier: Carrier) -> f64 {
        match carrier {
            Carrier::Uplink => 1.0,
            Carrier::Downlink => self.beta(),
        }
    }

    /// Grid spacing 2/G.
    pub fn grid_step(&self) -> f64 {
        2.0 / self.grid_size as f64
    }

    /// i-th grid angle (0-based), `-1 + 2 i / G`.
    pub fn grid_point(&self, i: usize) -> f64 {
        -1.0 + 2.0 * i as f64 / self.grid_size as f64
    }

    pub fn grid_points(&self) -> Vec<f64> {
        (0..self.grid_size).map(|i| self.grid_point(i)).collect()
    }
}

/// Steering vector `a(xi)` with entries `exp(j pi k s xi)`, k = 0..M-1, where
/// `s` is the carrier scale.
pub fn array_response(model: &UlaModel, xi: f64, carrier: Carrier) -> Result<CVector> {
    if !(-1.0..=1.0).contains(&xi) {
        return Err(Error::Domain(xi));
    }
    Ok(steering(model.num_antennas(), model.carrier_scale(carrier) * xi))
}

pub(crate) fn steering(m: usize, scaled_angle: f64) -> CVector {
    CVector::from_fn(m, |k, _| Complex64::from_polar(1.0, PI * k as f64 * scaled_angle))
}
