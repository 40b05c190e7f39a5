//! Complex fields on uniform square grids: sampling, Wirtinger derivatives,
//! discrete `L^p` / Sobolev norms over disks, and the `FLD1` file format.

mod diff;
mod field;
mod fld1;
mod norm;
mod spec;

pub use diff::{
    fornberg_weights, partial_x, partial_y, wirtinger_dz, wirtinger_dzbar, wirtinger_pair,
    wirtinger_tower,
};
pub use field::{sample_function, ComplexField};
pub use fld1::{load_fld1, read_fld1, save_fld1, write_fld1};
pub use norm::{lp_norm, sobolev_norm, sobolev_norms_upto, sup_norm_in, sup_sobolev_norm};
pub use spec::{DiskRegion, GridSpec, SobolevSpec};
