pub mod figures;
pub mod identity;
pub mod laplace;
pub mod mc;
pub mod queue;
pub mod renyi;

/// Prefixes library errors with the flag or operation they came from.
pub fn ctx<E: std::fmt::Display>(what: &'static str) -> impl Fn(E) -> String {
    move |e| format!("{what}: {e}")
}
