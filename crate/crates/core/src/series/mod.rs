//! Truncated Laurent series, the Weierstrass expansion, and the ring
//! generated by P and P'.

pub mod elliptic;
pub mod laurent;
pub mod wp;

pub use elliptic::EllipticElement;
pub use laurent::LaurentSeries;
pub use wp::{wp_prime_series, wp_series};
