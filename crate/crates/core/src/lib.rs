pub mod coords;
pub mod equilibria;
pub mod error;
pub mod game;
pub mod linalg;
pub mod tol;
pub mod expansion;
pub mod bounds;
pub mod blowup;
pub mod lq;
pub mod scenario;
