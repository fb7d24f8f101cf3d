pub mod bent;
pub mod knot;
pub mod linalg;
pub mod surgery;
pub mod verify;
