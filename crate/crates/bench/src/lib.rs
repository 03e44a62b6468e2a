//! Fixtures shared by the benchmarks.

/// A sketch with one pullback square.
pub const PULLBACK_SKETCH: &str = "sketch square
objects: A B C P
arrows:
  r0 : A -> C
  r1 : B -> C
  q0 : P -> A
  q1 : P -> B
  d : P -> C
compose:
  r0 . q0 = d
  r1 . q1 = d
pullback-cone:
  glue : q0 q1 over r0 r1
";

/// Sequents over the monoid theory with a mix of verdicts.
pub const MONOID_SEQUENTS: &[&str] = &[
    "[x:*] true |- mul(x, e) = x",
    "[x:*] true |- mul(x, x) = x",
    "[x:*] mul(x, x) = e |- mul(mul(x, x), x) = x",
    "[x:*, y:*] mul(x, y) = e |- mul(y, x) = e",
];
