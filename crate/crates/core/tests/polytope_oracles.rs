use fukaya_core::polytopes::{
    alternating_sum, associahedron_all_faces, associahedron_certificate, check_facet_products, f_vector, multiplihedron_all_faces,
    multiplihedron_certificate, multiplihedron_faces,
};

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Dissections of an m-gon by j non-crossing diagonals.
fn dissections(m: u64, j: u64) -> u64 {
    binomial(m - 3, j) * binomial(m + j - 1, j) / (j + 1)
}

#[test]
fn associahedron_faces_count_polygon_dissections() {
    for d in 2..=6usize {
        let faces = associahedron_all_faces(d).unwrap();
        let f = f_vector(faces.iter().map(|t| t.dim()));
        let m = d as u64 + 1;
        let expected: Vec<usize> = (0..=d - 2).map(|k| dissections(m, (d - 2 - k) as u64) as usize).collect();
        assert_eq!(f, expected, "K{d}");
        assert!(faces.iter().all(|t| t.leaves() == d));
    }
}

#[test]
fn associahedron_vertices_are_catalan_and_faces_are_schroeder() {
    let catalan = [1, 1, 2, 5, 14, 42];
    let schroeder = [1, 1, 3, 11, 45, 197];
    assert!(associahedron_all_faces(1).is_err());
    for d in 2..=6usize {
        let faces = associahedron_all_faces(d).unwrap();
        assert_eq!(faces.len(), schroeder[d - 1], "faces of K{d}");
        assert_eq!(faces.iter().filter(|t| t.dim() == 0).count(), catalan[d - 1], "vertices of K{d}");
    }
}

#[test]
fn multiplihedron_vertex_counts() {
    // OEIS A121988
    let expected = [1, 2, 6, 21, 80, 322];
    for d in 1..=6usize {
        assert_eq!(multiplihedron_faces(d, d - 1).unwrap().len(), expected[d - 1], "vertices of J{d}");
    }
}

#[test]
fn faces_are_contractible() {
    for d in 2..=6usize {
        let fk = f_vector(associahedron_all_faces(d).unwrap().iter().map(|t| t.dim()));
        let fj = f_vector(multiplihedron_all_faces(d).unwrap().iter().map(|t| t.dim()));
        assert_eq!(alternating_sum(&fk), 1, "K{d}");
        assert_eq!(alternating_sum(&fj), 1, "J{d}");
        assert_eq!(fk.len(), d - 1);
        assert_eq!(fj.len(), d);
    }
}

#[test]
fn facets_biject_with_boundary_terms() {
    for d in 2..=5 {
        let c = associahedron_certificate(d).unwrap();
        assert!(c.bijective, "K{d}");
        assert_eq!(c.facet_count, c.term_count);
    }
    for d in 1..=4 {
        let c = multiplihedron_certificate(d).unwrap();
        assert!(c.bijective, "J{d}");
        assert_eq!(c.facet_count, c.term_count);
    }
}

#[test]
fn multiplihedron_facets_are_products() {
    for d in 1..=5 {
        assert_eq!(check_facet_products(d).unwrap(), Vec::new(), "J{d}");
    }
}

#[test]
fn every_face_contracts_to_lower_dimension() {
    for t in associahedron_all_faces(5).unwrap() {
        for c in t.contractions() {
            assert_eq!(c.dim(), t.dim() + 1);
            assert_eq!(c.leaves(), t.leaves());
        }
    }
    for t in multiplihedron_all_faces(4).unwrap() {
        for c in t.contractions() {
            assert_eq!(c.dim(), t.dim() + 1);
            assert_eq!(c.leaves(), t.leaves());
        }
    }
}
