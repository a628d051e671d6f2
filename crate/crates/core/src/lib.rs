pub mod arith;
pub mod delta;
pub mod error;
pub mod poly;
pub mod predicates;
pub mod ring;
pub mod witt;
pub mod witt_poly;

pub use error::{Error, Result};
pub use ring::{Elem, RingElement, RingHandle, RingKind, RingMap};
pub use poly::IntPolynomial;
pub use predicates::{classify, PropertyReport};
pub use delta::FrobeniusLift;
pub use witt::{WittRing, WittVector};
pub use witt_poly::WittPolyTable;
