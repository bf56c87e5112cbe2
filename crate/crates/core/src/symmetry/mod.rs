//! Finite counterparts of the symmetry arguments on families of elements:
//! sunflowers, ideal-filter brackets over a subalgebra, membership in
//! `G_P(R)`, and an exploratory dichotomy scanner.

pub mod bracket;
pub mod dichotomy;
pub mod sunflower;

pub use bracket::{bracket_of, gp_member, Bracket};
pub use dichotomy::{dichotomy_scan, DichotomyReport, ScanMode, ScanOptions};
pub use sunflower::{sunflower, Sunflower, SunflowerSearch};
