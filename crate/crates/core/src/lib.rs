//! Decoherence of a central qubit coupled to an anisotropic XY spin chain.
//!
//! The chain is mapped to free fermions; each `(k, -k)` momentum pair
//! contributes an independent factor to the coherence `D(t)`, so the exact
//! result is a product over `N/2` modes. On top of that sit Gaussian
//! approximations for weak and strong coupling, and brute-force oracles used
//! to validate everything.
//!
//! * [`spectrum`]: momentum grid, dispersion, Bogoliubov angles.
//! * [`echo`]: exact per-mode factors and the full coherence series.
//! * [`gaussian`]: random-walk widths, envelopes and fits.
//! * [`oracle`]: 4×4 block and Fock-space exact diagonalisation.
//! * [`approx`]: named approximations behind a common trait.

pub mod approx;
pub mod echo;
pub mod error;
pub mod gaussian;
pub mod oracle;
pub mod spectrum;

pub use approx::{ApproxRegistry, Approximation};
pub use echo::{coherence_series, EchoEvaluator, EchoSeries, InitialState, ModeFormula};
pub use error::{Error, Result};
pub use spectrum::{ChainSpec, FieldSet, ModeData};
