/// Scalar type for all floating-point computation: f32 or f64.
pub trait Real: num_traits::Float + num_traits::FromPrimitive + std::fmt::Debug {}
impl Real for f32 {}
impl Real for f64 {}
