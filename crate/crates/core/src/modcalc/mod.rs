//! Profunctor calculus: tensors over a category, lifting homs, exhibition of
//! lifting homs, and adjunctions between profunctors.

pub mod adjunction;
pub mod lifting;
pub mod tensor;

pub use adjunction::{check_adjunction, AdjunctionData};
pub use lifting::{
    exhibits_as_left_hom, exhibits_as_right_hom, factor_through_lifting, lifting_hom_left, lifting_hom_right, transpose,
    Exhibition, LiftingHom, Side,
};
pub use tensor::{map_tensor, tensor_over, Iso, QuotientPresentation};

#[cfg(test)]
mod tests;
