use barrierlab_core::{Family, Source};

/// Parses `closed`, `incoming`, `reflected`, `series`, `series:N` or
/// `term:F:N` (`F` one of `R`, `A`, `B`, `T`). A bare `series` takes
/// `default_terms` terms.
pub fn parse_source(text: &str, default_terms: usize) -> Option<Source> {
    let parts: Vec<&str> = text.trim().split(':').collect();
    let index = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1);
    match parts.as_slice() {
        ["closed"] => Some(Source::ClosedForm),
        ["incoming"] => Some(Source::IncomingOnly),
        ["reflected"] => Some(Source::Reflected),
        ["series"] => Some(Source::Series(default_terms)),
        ["series", n] => index(n).map(Source::Series),
        ["term", family, n] => {
            let family = Family::from_label(family).filter(|f| *f != Family::Incident)?;
            index(n).map(|n| Source::Term(family, n))
        }
        _ => None,
    }
}

/// Inverse of [`parse_source`].
pub fn source_spec(source: Source) -> String {
    match source {
        Source::ClosedForm => "closed".into(),
        Source::IncomingOnly => "incoming".into(),
        Source::Reflected => "reflected".into(),
        Source::Series(n) => format!("series:{n}"),
        Source::Term(family, n) => format!("term:{}:{n}", family.label()),
    }
}
