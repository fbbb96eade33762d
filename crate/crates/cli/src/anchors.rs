//! Check ids mapped to the mathematical statement each check exercises.

pub const ANCHORS: &[(&str, &str)] = &[
    ("presentation.counts", "quadratic presentation: generator and relation counts"),
    ("presentation.degrees", "relations R^(i,j) live in degree e_i+e_j"),
    ("hilbert.lee", "Lee's closed-form multigraded Hilbert series"),
    ("hilbert.degree-one", "sections of L_i: dim V^(i) = n-2"),
    ("hilbert.pair", "dim A_(e_i+e_j) = (n-2)^2-(n-3)"),
    ("hilbert.three-points", "A_3 is a polynomial ring in 3 variables"),
    ("hilbert.restricted", "relative cartesian power lemma for B_(n,m)"),
    ("hilbert.curve-module", "universal curve module factorization"),
    ("conifold", "conifold singularity xy=zt"),
    ("gb.triple", "standard monomials match the closed-form series"),
    ("gb.dimension", "dimension 2n-3+m of the miniversal deformation base"),
    ("gb.rational", "prime-field run agrees with the rational run"),
    ("geometry.vanishing", "multiplication rule f_i f_j = a_ij f_j + a_ji f_i + c_ij"),
    ("geometry.cij", "well-definedness of c_ij"),
    ("geometry.random", "the ideal is nonzero (random points are off the variety)"),
    ("geometry.jacobian", "Jacobian rank equals the expected codimension at sample points"),
    ("geometry.singular", "singular locus has small dimension"),
    ("koszul.b2", "Koszul duality in degree 2: A^!_2 = R*"),
    ("koszul.dims", "Koszulness conjecture for A_n"),
];

pub fn anchor(id: &str) -> &'static str {
    ANCHORS
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, v)| *v)
        .unwrap_or_else(|| panic!("no anchor registered for check id {id}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<&str> = ANCHORS.iter().map(|a| a.0).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), ANCHORS.len());
    }
}
