//! End-user surface: example-complex generators, the named pipelines
//! (Blaschke, Ahlfors, Weierstrass), file formats, and SVG rendering.

pub mod generators;
pub mod io;
pub mod pipelines;
pub mod svg;

pub use generators::{gen_annulus, gen_disc, gen_torus, GenError};
pub use pipelines::{ahlfors, blaschke, weierstrass, PipelineError, PipelineReport};
