//! Sparsifying precoder design: DFT beam gains from DL covariances, beam/user
//! graph, exact selection and the beam-selection matrix `B`.

mod design;
mod dft;
mod gains;

pub use design::{
    beam_selection_matrix, build_graph, default_p0, design_from_gains, design_precoder, write_precoder_csv,
    DesignParams, SparsifyingPrecoder,
};
pub use dft::{dft_column, dft_matrix};
pub use gains::{circulant_gains, BeamGains, IMAG_RESIDUE_WARN};
