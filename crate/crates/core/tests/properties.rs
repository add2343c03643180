//! Property suites over random inputs; see `support` for the properties.

mod support;

#[test]
fn gcd_divides_and_is_divided_by_common_factor() {
    support::gcd_identities(96).unwrap();
}

#[test]
fn resultant_is_multiplicative() {
    support::resultant_product_formula(96).unwrap();
}

#[test]
fn resultant_vanishes_exactly_on_common_factors() {
    support::resultant_common_root(96).unwrap();
}

#[test]
fn psi_split_reconstructs_and_is_primitive() {
    support::psi_reconstruction(96).unwrap();
}

#[test]
fn properness_degree_of_graphs_and_folded_graphs() {
    support::properness_values(48).unwrap();
}

#[test]
fn normalization_gives_standard_form() {
    support::standard_form(96).unwrap();
}

#[test]
fn render_then_parse_is_identity() {
    support::parse_render_roundtrip(128).unwrap();
}

#[test]
fn generator_is_deterministic() {
    support::generator_determinism(6).unwrap();
}

#[test]
fn emitted_certificates_pass_independent_checks() {
    support::certificate_invariants(3, 2000).unwrap();
}
