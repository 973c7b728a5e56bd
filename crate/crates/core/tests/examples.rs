use thh_core::monadic::{colimit_direct, colimit_via_coequalizer, iso_check, tensor_via_coequalizer, AlgebraDiagram, Semilattice};
use thh_core::{
    cyclic_bar, relative_bar, tensor_with_simplicial_set, two_sided_bar, ChainComplex, CoefficientRing, FiniteSimplicialSet,
    FreeGca, Generator,
};

fn f(p: u32) -> CoefficientRing {
    CoefficientRing::PrimeField(p)
}

fn alg(ring: CoefficientRing, gens: &[(&str, usize)], n: usize) -> FreeGca {
    FreeGca::graded(ring, gens, n).unwrap()
}

fn ranks(c: ChainComplex) -> Vec<u64> {
    assert!(c.verify());
    c.homology_ranks()
}

#[test]
fn tor_of_a_polynomial_algebra() {
    // F2[x2]: classes 1 and sigma x in degree 3.
    let a = alg(f(2), &[("x", 2)], 10);
    assert_eq!(ranks(two_sided_bar(&a, 10).unwrap()), vec![1, 0, 0, 1, 0, 0, 0, 0, 0, 0]);
}

#[test]
fn tor_of_an_exterior_algebra_is_divided_powers() {
    let a = alg(f(3), &[("x", 1)], 7);
    assert_eq!(ranks(two_sided_bar(&a, 7).unwrap()), vec![1, 0, 1, 0, 1, 0, 1]);
}

#[test]
fn hochschild_homology_examples() {
    let a = alg(f(2), &[("x", 2)], 7);
    assert_eq!(ranks(cyclic_bar(&a, 7).unwrap()), vec![1, 0, 1, 1, 1, 1, 1]);
    // Lambda(x3) over F5: 1 and x3 in degrees 0 and 3, then the divided
    // powers of sigma x3 tensored with both.
    let e = alg(f(5), &[("x", 3)], 10);
    assert_eq!(ranks(cyclic_bar(&e, 10).unwrap()), vec![1, 0, 0, 1, 1, 0, 0, 1, 1, 0]);
    let trivial = FreeGca::trivial(f(3), 4);
    assert_eq!(ranks(cyclic_bar(&trivial, 4).unwrap()), vec![1, 0, 0, 0]);
}

#[test]
fn subdivided_circle_agrees_with_the_cyclic_bar() {
    let a = alg(f(2), &[("x", 2)], 7);
    let s = FiniteSimplicialSet::circle_subdivided(3).unwrap();
    assert_eq!(ranks(tensor_with_simplicial_set(&a, &s, 7).unwrap()), ranks(cyclic_bar(&a, 7).unwrap()));
}

#[test]
fn interval_tensor_is_contractible_to_the_algebra() {
    let a = alg(f(3), &[("x", 1), ("y", 2)], 8);
    let s = FiniteSimplicialSet::interval();
    assert_eq!(ranks(tensor_with_simplicial_set(&a, &s, 8).unwrap()), a.poincare_series(7).unwrap().ranks());
}

#[test]
fn relative_bar_examples() {
    // Trivial H: B(A, A, A) retracts onto A.
    let a = alg(f(2), &[("x", 2)], 8);
    let h = FreeGca::trivial(f(2), 8);
    assert_eq!(ranks(relative_bar(&a, &h, 8).unwrap()), a.poincare_series(7).unwrap().ranks());
    // Ground-field A: Tor over H.
    let k = FreeGca::trivial(f(2), 8);
    let h = alg(f(2), &[("y", 2)], 8);
    assert_eq!(ranks(relative_bar(&k, &h, 8).unwrap()), ranks(two_sided_bar(&h, 8).unwrap()));
    // A = F2[x2], H = E{e1}: A tensored with divided powers on a degree-2 class.
    let h = FreeGca::new(f(2), vec![Generator::exterior("e", 1)], 8).unwrap();
    let a = alg(f(2), &[("x", 2)], 8);
    assert_eq!(ranks(relative_bar(&a, &h, 8).unwrap()), vec![1, 0, 2, 0, 3, 0, 4, 0]);
}

#[test]
fn integral_bar_constructions_are_free_here() {
    // Tor over Z[x2] is Z in degrees 0 and 3.
    let a = alg(CoefficientRing::Integers, &[("x", 2)], 8);
    let h = two_sided_bar(&a, 8).unwrap().homology_all();
    assert_eq!(h.free_ranks(), vec![1, 0, 0, 1, 0, 0, 0, 0]);
    // Lambda over Z on a degree-1 class: Tor is the divided power algebra,
    // free as a group.
    let e = alg(CoefficientRing::Integers, &[("e", 1)], 8);
    let t = two_sided_bar(&e, 8).unwrap().homology_all();
    assert_eq!(t.free_ranks(), vec![1, 0, 1, 0, 1, 0, 1, 0]);
    assert!(t.entries().iter().all(|g| g.torsion.is_empty()));
}

#[test]
fn free_semilattices() {
    assert_eq!(Semilattice::free::<&str>(&[]).unwrap().len(), 1);
    assert_eq!(Semilattice::free(&["a"]).unwrap().len(), 2);
    let ab = Semilattice::free(&["a", "b"]).unwrap();
    assert_eq!(ab.len(), 4);
    let (a, b) = (ab.index_of("{a}").unwrap(), ab.index_of("{b}").unwrap());
    assert!(!ab.leq(a, b) && !ab.leq(b, a));
    assert_eq!(ab.label(ab.join(a, b)), "{a,b}");
}

#[test]
fn colimit_and_tensor_examples() {
    let a = Semilattice::free(&["a"]).unwrap();
    let b = Semilattice::free(&["b"]).unwrap();
    let coproduct = AlgebraDiagram::new(vec![a.clone(), b], Vec::new()).unwrap();
    let ab = Semilattice::free(&["a", "b"]).unwrap();
    assert!(iso_check(&colimit_via_coequalizer(&coproduct).unwrap(), &ab));
    assert!(iso_check(&colimit_direct(&coproduct).unwrap(), &ab));
    assert!(iso_check(&tensor_via_coequalizer(&a, 2).unwrap(), &ab));
    let chain = Semilattice::chain(3).unwrap();
    assert!(iso_check(&tensor_via_coequalizer(&chain, 1).unwrap(), &chain));
    let copower = colimit_direct(&AlgebraDiagram::discrete(&chain, 2)).unwrap();
    assert!(iso_check(&tensor_via_coequalizer(&chain, 2).unwrap(), &copower));
}

#[test]
fn isomorphism_examples() {
    let ab = Semilattice::free(&["a", "b"]).unwrap();
    assert!(iso_check(&ab, &ab));
    assert!(!iso_check(&ab, &Semilattice::chain(3).unwrap()));
    let relabelled = Semilattice::free(&["p", "q"]).unwrap();
    assert!(iso_check(&ab, &relabelled));
    // Same size, different shape: a 4-chain is not the square.
    assert!(!iso_check(&ab, &Semilattice::chain(4).unwrap()));
}
