//! Exact computation toolkit for the Ising model on the self-similar
//! Schreier graphs of the Grigorchuk, Basilica and Hanoi Towers H(3) groups
//! and on Sierpinski graphs: graph construction from the group recursions,
//! closed-polygon generating functions (closed forms and recursions),
//! partition functions, thermodynamic limits, renormalization flows,
//! weighted edge-label statistics, and the polygon-to-dimer transform —
//! all validated by independent brute-force oracles.
//!
//! ```
//! use schreier_ising::{genfun, graph, group::Family, oracle};
//!
//! // Level-2 Hanoi Schreier graph: 9 vertices, 12 loopless edges.
//! let sigma = graph::build_schreier(Family::Hanoi, 2)?;
//! assert_eq!(sigma.vertex_count(), 9);
//!
//! // Its closed-polygon generating function, and the brute-force count.
//! let gamma = genfun::hanoi_gamma_recursive(2)?.gamma;
//! let enumerated = oracle::enumerate_polygons(&sigma, oracle::Weighting::Univariate, 24)?;
//! assert_eq!(gamma, enumerated);
//! assert_eq!(gamma.at_ones(), 16);
//!
//! // Contract to the Sierpinski graph; polygon counts obey the same law.
//! let omega = graph::contract_to_sierpinski(&sigma)?;
//! assert_eq!(omega.cycle_space_rank().rank, 4);
//! # Ok::<(), schreier_ising::Error>(())
//! ```

pub mod acceptance;
pub mod cli;
pub mod error;
pub mod fisher;
pub mod genfun;
pub mod graph;
pub mod group;
pub mod ising;
pub mod oracle;
pub mod poly;

pub use error::{Error, Result};
