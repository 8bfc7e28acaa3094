//! Two-player EPR-type quantum games.
//!
//! * [`game`]: classical 2x2 bimatrix games and their equilibria.
//! * [`gfun`]: piecewise-linear direction-to-probability maps.
//! * [`correlation`]: games played through measured spin correlations.
//! * [`epr`]: Monte Carlo simulation of the arbiter's protocol.
//! * [`lhv`]: the four-coin / sixteen-subset hidden variable model.
//! * [`quantum`]: small exact state-vector reference computations.

pub mod correlation;
pub mod epr;
pub mod error;
pub mod game;
pub mod gfun;
pub mod grid;
pub mod lhv;
pub mod par;
pub mod quantum;

pub use error::{Error, Result};
