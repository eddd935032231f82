//! The bundled problem files, one per certificate.

use crate::cert::Problem;
use crate::dsl::{parse_problem, ProblemSpec};

pub const FRANEL_ALT_QUADRATIC: &str = "franel_alt_quadratic";
pub const SUN_POLY_NEG1: &str = "sun_poly_neg1";
pub const FRANEL_NEG8: &str = "franel_neg8";
pub const TRINOMIAL_SQ: &str = "trinomial_sq";
pub const DOMB_16: &str = "domb_16";
pub const FRANEL_ALT_QUARTIC: &str = "franel_alt_quartic";
pub const SUN_G_CUBIC: &str = "sun_g_cubic";
pub const APERY_ALT_QUINTIC: &str = "apery_alt_quintic";

const FILES: &[(&str, &str)] = &[
    (FRANEL_ALT_QUADRATIC, include_str!("../problems/franel_alt_quadratic.tel")),
    (SUN_POLY_NEG1, include_str!("../problems/sun_poly_neg1.tel")),
    (FRANEL_NEG8, include_str!("../problems/franel_neg8.tel")),
    (TRINOMIAL_SQ, include_str!("../problems/trinomial_sq.tel")),
    (DOMB_16, include_str!("../problems/domb_16.tel")),
    (FRANEL_ALT_QUARTIC, include_str!("../problems/franel_alt_quartic.tel")),
    (SUN_G_CUBIC, include_str!("../problems/sun_g_cubic.tel")),
    (APERY_ALT_QUINTIC, include_str!("../problems/apery_alt_quintic.tel")),
];

/// `(name, source)` for every bundled file.
pub fn sources() -> &'static [(&'static str, &'static str)] {
    FILES
}

pub fn source(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses a bundled file. Panics on an unknown name or a malformed file,
/// both of which are build defects.
pub fn spec(name: &str) -> ProblemSpec {
    let src = source(name).unwrap_or_else(|| panic!("no bundled problem `{name}`"));
    parse_problem(src).unwrap_or_else(|e| panic!("bundled problem `{name}`: {e}"))
}

pub fn load(name: &str) -> Problem {
    spec(name).to_problem()
}
