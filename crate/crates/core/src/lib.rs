pub mod bounds;
pub mod error;
pub mod grids;
pub mod harness;
pub mod instance;
pub mod policies;
pub mod simulator;
pub mod trace;

pub use error::{Error, Result};
pub use grids::{make_grid, Grid, GridFamily};
pub use instance::BanditInstance;
pub use policies::{PolicyKind, PolicySpec};
pub use simulator::{mean_regret, Execution, RegretEstimate};
