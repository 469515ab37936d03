//! Finite-temperature RPA polarizability of the electron gas on the complex
//! momentum plane, and the screened potential of a static impurity.
//!
//! Module map:
//!
//! * [`gas`]: density, temperature, chemical potential and thermal weight.
//! * [`polarizability`]: the `T = 0` polarizability with its branch cuts, the
//!   thermal superposition `χᵀ(q)` and the kernel `ν(q) = q² - λχᵀ(q)`.
//! * [`quad`]: adaptive, exponentially-decaying and oscillatory quadrature.
//! * [`analyticity`]: contour probes showing that `χᵀ` is continuous but
//!   nowhere analytic.
//! * [`potential`]: the impurity potential `V(r)` by direct quadrature, by
//!   the cut-resummed double integral, and in its asymptotic forms.
//! * [`acceptance`]: the end-to-end validation criteria shared by the test
//!   suite and the `check` command.

pub mod acceptance;
pub mod analyticity;
pub mod error;
pub mod gas;
pub mod polarizability;
pub mod potential;
pub mod quad;
pub mod roots;

pub use error::{Error, Result};
pub use gas::{ElectronGas, MuMode};
pub use quad::{QuadratureConfig, QuadratureResult};
