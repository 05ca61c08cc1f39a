//! Exact computation in quantum algebras over non-archimedean fields.
//!
//! - [`nascalar`]: coefficient fields ℚ((t)) and ℚ_p with exact log-norms.
//! - [`qtorus`]: quantum tori, Gauss and point seminorms, torsor actions,
//!   substitution homomorphisms.
//! - [`scattering`]: wall automorphisms, slope factorization, quantum
//!   dilogarithms, collisions of lines.
//! - [`singmodel`]: the singular-model algebra `A_q(S)`, its charts, shift
//!   representations and spectrum maps.
//! - [`qgl2`]: quantum `GL_2` over ℚ_p and its weighted-shift representations.

pub mod nascalar;
pub mod qtorus;
pub mod scattering;
pub mod singmodel;
pub mod qgl2;
