//! Exact-arithmetic toolkit for translation quivers, mesh categories,
//! coverings, and Auslander-Reiten components of representation-finite
//! hereditary algebras.

pub mod algfile;
pub mod cli;
pub mod cover;
pub mod field;
pub mod knit;
pub mod linalg;
pub mod meshcat;
pub mod modulation;
pub mod quiver;
pub mod rep;
pub mod roots;
pub mod tqfile;
pub mod wellbehaved;
