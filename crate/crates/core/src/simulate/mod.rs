//! Stochastic validation: the constrained SDE, exit times and the jump
//! chain on `B_0`.

pub mod classify;
pub mod csv;
pub mod exit;
pub mod kmc;
pub mod sde;

pub use classify::{classify_configuration, Classifier, Label};
pub use exit::{mean_exit_time, ExitOptions, ExitTimeStats, Target};
pub use kmc::{kmc_step, run_interface_trace, run_jump, JumpEvent, JumpRun, RateModel};
pub use sde::{run_sde, step_em, SdeRun};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for stream `stream` of `seed`; independent streams share the
/// seed and never overlap.
pub fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
