pub mod interval;
pub mod linprog;
pub mod enclosure;
pub mod model;
pub mod candidate;
pub mod oracle;
pub mod bench;
pub mod robust;
pub mod timing;
