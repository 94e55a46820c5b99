// SPDX-License-Identifier: Apache-2.0

//! Life-cycle carbon model for monolithic 2D, 2.5D and 3D integrated
//! circuits.
//!
//! A design is loaded with [`params::load_config`], evaluated with
//! [`pipeline::evaluate`] and explored with the functions in [`explorer`].

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carbon;
pub mod error;
pub mod explorer;
pub mod geometry;
pub mod params;
pub mod pipeline;
pub mod report;
pub mod yieldmodel;

pub use carbon::{CarbonBreakdown, GammaBasis, Metrics};
pub use error::{Error, Result};
pub use geometry::{DieGeometry, StackGeometry};
pub use params::{
    load_config, load_config_file, Config, DesignSpec, DieSpec, FabEnvironment, Integration, Registry,
    TechnologyProfile,
};
pub use pipeline::{evaluate, EvalOptions, Evaluation};
pub use yieldmodel::YieldContext;
