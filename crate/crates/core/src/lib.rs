pub mod descent;
pub mod funcfield;
pub mod groups;
pub mod oracle;
pub mod reductions;
pub mod scalars;
