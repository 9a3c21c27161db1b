//! Exact entanglement dynamics of a two-level atom coupled to one, several,
//! or a continuum of field modes, starting from the field vacuum.
//!
//! The amplitude `u(t)` for the atom to stay excited controls everything for
//! pure initial states; mixed initial states are evolved exactly on the
//! truncated atom-field space and scored with the logarithmic negativity.
//!
//! ```
//! use entangledyn::{jcm, measures};
//! let p = jcm::JcmParams::new(1.0, 0.0, 1.0e7).unwrap();
//! let u = jcm::jcm_u(std::f64::consts::FRAC_PI_4, &p);
//! let ln = measures::ln_from_u(u.norm(), 0.0).unwrap();
//! assert!((ln - 1.0).abs() < 1e-12);
//! ```

pub mod cavity;
pub mod error;
pub mod jcm;
pub mod measures;
pub mod multimode;
pub mod oracle;
pub mod state;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
