//! Müntz polynomials over quasi-lacunary spectra, weighted `L^p` quadrature
//! on [0, 1], and empirical checks of Carleson embedding and decoupling
//! inequalities.
//!
//! ```
//! use muntzlab::measure::MeasureSpec;
//! use muntzlab::norms::lp_norm;
//! use muntzlab::poly::MuntzPolynomial;
//! use muntzlab::quad::QuadratureConfig;
//!
//! let f = MuntzPolynomial::new([(1.0, 1.0), (64.0, 1.0)]).unwrap();
//! let nu0 = MeasureSpec::jacobi(0.0).unwrap();
//! let norm = lp_norm(&f, &nu0, 2.0, &QuadratureConfig::default()).unwrap();
//! let exact = (1.0 / 3.0 + 2.0 / 66.0 + 1.0 / 129.0f64).sqrt();
//! assert!((norm - exact).abs() < 1e-10);
//! ```

pub mod embeddings;
pub mod error;
pub mod inequalities;
pub mod measure;
pub mod norms;
pub mod poly;
pub mod quad;
pub mod sampling;
pub mod specfile;
pub mod spectrum;

pub use error::{Error, Result};
