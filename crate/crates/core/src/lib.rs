//! Tree path evaluation: offline nearest common ancestors, MST verification
//! and construction, flowgraph interval analysis, immediate dominators and
//! Kruskal component trees, built on compressed-tree data structures.
//!
//! Vertex ids are dense and 1-based everywhere; index 0 of per-vertex
//! vectors is unused and doubles as the null vertex.

pub mod bench;
pub mod dominators;
pub mod dsu;
pub mod gen;
pub mod graphio;
pub mod intervals;
pub mod kruskal;
pub mod linkeval;
pub mod mst;
pub mod nca;
pub mod oracle;
pub mod partition;
pub mod topobatch;

mod error;

pub use error::{Error, Result};

/// Null vertex id.
pub const NIL: usize = 0;

/// Default microtree size threshold: max(1, floor(log2(n)^(1/3))).
pub fn default_g(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    let lg = (n as f64).log2();
    let mut g = lg.cbrt().floor() as usize;
    // guard against cbrt rounding just below an exact cube
    while ((g + 1) as f64).powi(3) <= lg {
        g += 1;
    }
    g.max(1)
}
