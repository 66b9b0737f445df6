//! Shared inputs for the benchmarks.

/// Queries of increasing cost: a textbook conditional, the shared-name
/// conditional, an odds update, a chain expansion and a full table.
pub const QUERIES: [(&str, &str); 5] = [
    ("textbook", "@regime(i0) P(E.m & Y.m | E.m + Y.m)"),
    ("shared_names", "@regime(i1) @r(1/50) P(E.f & Y.f | E.fN + Y.fN)"),
    ("odds", "@regime(i2) odds(E.f & Y.f : !(E.f & Y.f) & (E.f + Y.f) | E.fN + Y.fN)"),
    ("chain", "@regime(i2) chain(Y.f, Y.N, E.f, E.!N)"),
    ("table", "@regime(i1) @r(0.3) table"),
];

/// Rational functions that show up as cell values and conditionals.
pub const FUNCTIONS: [&str; 4] = ["(2 - r)/(4 - r)", "r^2/4", "(1 - 2r)/(1 - r)", "(4r - r^2)/4"];
