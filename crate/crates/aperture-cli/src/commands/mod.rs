pub mod bell;
pub mod boundary;
pub mod record;
pub mod search;
pub mod trace;
