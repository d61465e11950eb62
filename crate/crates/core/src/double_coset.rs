//! Exact membership in a double coset `HgK` of a free group, and
//! construction of finite-index separability witnesses for non-members.
//!
//! The pipeline reduces to `g = 1` by conjugating `K`, embeds the conjugate
//! `K′` as a free factor of a finite-index subgroup `F₀` (the completion of
//! its core), splits `H` along cosets of `H ∩ F₀`, and answers each coset
//! case inside `F₀` with a letter-set component test in a rewritten core
//! graph. Witnesses come back as covers over the original alphabet and are
//! always checked by the independent certificate verifier.

use std::collections::{BTreeSet, HashMap};

use crate::certify::{verify_certificate, Certificate};
use crate::completion::complete;
use crate::error::{Error, Result};
use crate::graph::{CoverGraph, Edge, LabeledGraph, Subgroup};
use crate::word::{Alphabet, Letter, LetterSet, Word};

/// The `g = 1` form of a double-coset instance: `f ∈ HgK` exactly when
/// `f·g⁻¹ ∈ H·(gKg⁻¹)`.
#[derive(Debug, Clone)]
pub struct ReducedInstance {
    pub h: Subgroup,
    /// `gKg⁻¹`
    pub k_conjugated: Subgroup,
    /// `f·g⁻¹`
    pub f_shifted: Word,
}

/// Replaces `(H, g, K, f)` by the equivalent instance `(H, 1, gKg⁻¹, fg⁻¹)`.
pub fn conjugation_reduce(h: &Subgroup, g: &Word, k: &Subgroup, f: &Word) -> ReducedInstance {
    let conjugated = k
        .generators()
        .iter()
        .map(|gen| gen.conjugated_by(g))
        .collect();
    ReducedInstance {
        h: h.clone(),
        k_conjugated: Subgroup::new(k.alphabet(), conjugated),
        f_shifted: f.concat(&g.inverse()),
    }
}

/// A finite-index subgroup `F₀` in which a given subgroup is a free factor.
///
/// `F₀` is the fundamental group of the completed core of the subgroup. A
/// spanning tree chosen inside the core splits the induced free basis into
/// the part generating the subgroup and a complementary part; words of `F₀`
/// are rewritten to and from that basis.
#[derive(Debug, Clone)]
pub struct FreeFactorContext {
    base_alphabet: Alphabet,
    cover: CoverGraph,
    tree: BTreeSet<Edge>,
    basis: Vec<Word>,
    factor_letters: LetterSet,
    complement_letters: LetterSet,
    basis_alphabet: Alphabet,
    edge_letter: HashMap<Edge, u32>,
}

/// Completes the core of `k` to a cover and extracts a basis of its
/// fundamental group in which `k` is generated by a subset of the letters.
pub fn free_factor_embed(k: &Subgroup) -> FreeFactorContext {
    let core = k.core();
    let cover = complete(core)
        .expect("subgroup cores are folded")
        .into_cover();
    let core_edges: BTreeSet<Edge> = core.edges().iter().copied().collect();
    // completion keeps the vertex set, so the core spans the cover and the
    // tree stays inside it
    let tree = cover
        .spanning_tree(cover.basepoint(), &core_edges)
        .expect("covers are connected");
    debug_assert!(tree.iter().all(|e| core_edges.contains(e)));
    let paths = cover.tree_paths(&tree);
    let mut basis = Vec::new();
    let mut edge_letter = HashMap::new();
    let mut factor = Vec::new();
    let mut complement = Vec::new();
    for e in cover.edges().iter().filter(|e| !tree.contains(e)) {
        let letter = basis.len() as u32 + 1;
        basis.push(crate::graph::basis_word(e, &paths));
        edge_letter.insert(*e, letter);
        if core_edges.contains(e) {
            factor.push(letter);
        } else {
            complement.push(letter);
        }
    }
    let basis_alphabet = Alphabet::new(basis.len().max(1) as u32);
    FreeFactorContext {
        base_alphabet: k.alphabet(),
        cover,
        tree,
        basis,
        factor_letters: factor.into_iter().collect(),
        complement_letters: complement.into_iter().collect(),
        basis_alphabet,
        edge_letter,
    }
}

impl FreeFactorContext {
    pub fn base_alphabet(&self) -> Alphabet {
        self.base_alphabet
    }

    /// The cover of `F₀` over the base alphabet.
    pub fn cover(&self) -> &CoverGraph {
        &self.cover
    }

    pub fn tree(&self) -> &BTreeSet<Edge> {
        &self.tree
    }

    /// The free basis of `F₀` as words over the base alphabet, in non-tree
    /// edge order.
    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    /// Basis letters whose edges lie in the embedded core: they generate the
    /// embedded subgroup.
    pub fn factor_letters(&self) -> &LetterSet {
        &self.factor_letters
    }

    /// The remaining basis letters; they generate the complementary factor.
    pub fn complement_letters(&self) -> &LetterSet {
        &self.complement_letters
    }

    pub fn basis_alphabet(&self) -> Alphabet {
        self.basis_alphabet
    }

    /// Index of `F₀` in the whole group.
    pub fn index(&self) -> usize {
        self.cover.index()
    }

    /// True when `w` belongs to `F₀`.
    pub fn contains(&self, w: &Word) -> bool {
        self.cover.read_total(self.cover.basepoint(), w) == self.cover.basepoint()
    }

    /// Rewrites a word of `F₀` in the basis: the path of `w` through the
    /// cover emits one signed basis letter per non-tree edge crossed.
    pub fn rewrite(&self, w: &Word) -> Result<Word> {
        let idx = self.cover.try_folded_index().expect("covers are folded");
        let mut v = self.cover.basepoint();
        let mut emitted = Vec::new();
        for l in w.letters() {
            let next = idx.step(v, *l).expect("reading on a cover is total");
            let e = if l.is_positive() {
                Edge::new(l.index(), v, next)
            } else {
                Edge::new(l.index(), next, v)
            };
            if let Some(&y) = self.edge_letter.get(&e) {
                emitted.push(if l.is_positive() {
                    Letter::positive(y)
                } else {
                    Letter::negative(y)
                });
            }
            v = next;
        }
        if v != self.cover.basepoint() {
            return Err(Error::NotInSubgroup);
        }
        Ok(Word::from_letters(emitted))
    }

    /// Substitutes every basis letter by its expansion over the base
    /// alphabet; inverse of [`FreeFactorContext::rewrite`] on `F₀`.
    pub fn expand(&self, w: &Word) -> Word {
        let mut letters = Vec::new();
        for l in w.letters() {
            let expansion = &self.basis[l.index() as usize - 1];
            if l.is_positive() {
                letters.extend(expansion.letters().iter().copied());
            } else {
                letters.extend(expansion.inverse().letters().iter().copied());
            }
        }
        Word::from_letters(letters)
    }

    /// Generators of `H ∩ F₀` written in the basis alphabet, from a basis of
    /// the fiber product of the core of `h` with the cover.
    pub fn intersection_in_basis(&self, h: &Subgroup) -> Result<Vec<Word>> {
        let product = h.core().pullback(self.cover.graph())?;
        let product = product.trimmed(&BTreeSet::new());
        let tree = product
            .spanning_tree(product.basepoint(), &BTreeSet::new())
            .expect("fiber product components are connected");
        product
            .basis(&tree)
            .iter()
            .map(|w| self.rewrite(w))
            .collect()
    }

    /// The cover, over the base alphabet, of the expansion of a subgroup of
    /// `F₀` given as a cover over the basis alphabet.
    ///
    /// States are pairs (cover vertex, basis-cover vertex): a base letter
    /// moves the first coordinate, and moves the second exactly when it
    /// crosses a non-tree edge, by the emitted basis letter. The result is
    /// the synchronized product realizing composition of the two coset
    /// actions; its vertex count is the product of the indices.
    pub fn lift_cover(&self, inner: &CoverGraph) -> CoverGraph {
        let outer_idx = self.cover.try_folded_index().expect("covers are folded");
        let inner_idx = inner.try_folded_index().expect("covers are folded");
        let start = (self.cover.basepoint(), inner.basepoint());
        let mut ids: HashMap<(usize, usize), usize> = HashMap::from([(start, 0)]);
        let mut states = vec![start];
        let mut edges = Vec::new();
        let mut head = 0;
        while head < states.len() {
            let (u, m) = states[head];
            let source = head;
            head += 1;
            for l in self.base_alphabet.letters() {
                let u2 = outer_idx.out(u, l).expect("cover letter is total");
                let m2 = match self.edge_letter.get(&Edge::new(l, u, u2)) {
                    Some(&y) => inner_idx.out(m, y).expect("cover letter is total"),
                    None => m,
                };
                let target = match ids.get(&(u2, m2)) {
                    Some(&id) => id,
                    None => {
                        states.push((u2, m2));
                        ids.insert((u2, m2), states.len() - 1);
                        states.len() - 1
                    }
                };
                edges.push(Edge::new(l, source, target));
            }
        }
        assert_eq!(
            states.len(),
            self.cover.index() * inner.index(),
            "lifted cover must realize the full product of indices"
        );
        let graph = LabeledGraph::new(
            self.base_alphabet,
            states.len(),
            0,
            edges,
            Default::default(),
        )
        .expect("lifted cover is well formed")
        .canonicalize();
        CoverGraph::try_from(graph).expect("lifted cover is complete")
    }
}

/// A left transversal of `H ∩ F₀` in `H`: one representative per orbit
/// vertex of the basepoint under `H`, the first being the identity.
#[derive(Debug, Clone)]
pub struct CosetDecomposition {
    reps: Vec<Word>,
    orbit: Vec<usize>,
}

impl CosetDecomposition {
    /// Representatives `hⱼ` with `H = ⊔ⱼ hⱼ·(H ∩ F₀)`.
    pub fn reps(&self) -> &[Word] {
        &self.reps
    }

    /// Orbit vertices, aligned with the representatives: the j-th vertex is
    /// `read(basepoint, hⱼ⁻¹)`.
    pub fn orbit(&self) -> &[usize] {
        &self.orbit
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Splits `H` along `H ∩ F₀` by sweeping the orbit of the basepoint in the
/// cover of `F₀` under the generators of `H`.
///
/// A vertex reached from `u` by reading `s⁻¹` gets representative `s·hᵤ`,
/// so each representative reads from its vertex back to the basepoint and
/// the transversal is a left one.
pub fn coset_decomposition(ctx: &FreeFactorContext, h: &Subgroup) -> CosetDecomposition {
    let cover = ctx.cover();
    let idx = cover.try_folded_index().expect("covers are folded");
    let base = cover.basepoint();
    let mut reps: Vec<Word> = vec![Word::identity()];
    let mut orbit = vec![base];
    let mut seen: HashMap<usize, usize> = HashMap::from([(base, 0)]);
    let mut head = 0;
    while head < orbit.len() {
        let u = orbit[head];
        let rep = reps[head].clone();
        head += 1;
        for gen in h.generators() {
            for s in [gen.clone(), gen.inverse()] {
                let u2 = idx
                    .read(u, &s.inverse())
                    .expect("reading on a cover is total");
                if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(u2) {
                    slot.insert(orbit.len());
                    orbit.push(u2);
                    reps.push(s.concat(&rep));
                }
            }
        }
    }
    CosetDecomposition { reps, orbit }
}

/// Membership in `H·⟨factor letters⟩` when the factor letters are part of a
/// free basis: attach the path of `f` to the core of `H` and test whether
/// its endpoint joins the factor-letter component of the basepoint.
///
/// Returns the answer together with the graph the test ran on.
pub fn member_free_factor_case(
    h: &Subgroup,
    factor_letters: &LetterSet,
    f: &Word,
) -> (bool, LabeledGraph) {
    let core = h.core();
    let gamma = core
        .with_path(core.basepoint(), f, "p_end")
        .expect("cores are folded")
        .fold();
    let p_end = gamma.mark("p_end").expect("path endpoint is marked");
    let gamma = gamma.trimmed(&BTreeSet::from([p_end]));
    let p_end = gamma.mark("p_end").expect("protected mark survives");
    let inside = gamma
        .component(gamma.basepoint(), factor_letters)
        .contains(&p_end);
    (inside, gamma)
}

/// One coset case of the pipeline: the instance restricted to a coset
/// representative of `H ∩ F₀` in `H`. `in_subgroup` is present exactly when
/// `rep⁻¹·f′ ∈ F₀`.
struct CosetCase {
    rep: Word,
    in_subgroup: Option<SubgroupCase>,
}

struct SubgroupCase {
    member: bool,
    graph: LabeledGraph,
}

struct Pipeline {
    reduced: ReducedInstance,
    ctx: FreeFactorContext,
    cases: Vec<CosetCase>,
}

impl Pipeline {
    fn member(&self) -> bool {
        self.cases
            .iter()
            .any(|c| matches!(&c.in_subgroup, Some(s) if s.member))
    }
}

fn run_pipeline(h: &Subgroup, g: &Word, k: &Subgroup, f: &Word) -> Pipeline {
    let reduced = conjugation_reduce(h, g, k, f);
    let ctx = free_factor_embed(&reduced.k_conjugated);
    let gens = ctx
        .intersection_in_basis(&reduced.h)
        .expect("alphabets agree");
    let h_in_basis = Subgroup::new(ctx.basis_alphabet(), gens);
    let decomposition = coset_decomposition(&ctx, &reduced.h);
    let cases = decomposition
        .reps()
        .iter()
        .map(|rep| {
            let shifted = rep.inverse().concat(&reduced.f_shifted);
            let in_subgroup = ctx.contains(&shifted).then(|| {
                let shifted_in_basis = ctx.rewrite(&shifted).expect("shifted word lies in F₀");
                let (member, graph) =
                    member_free_factor_case(&h_in_basis, ctx.factor_letters(), &shifted_in_basis);
                SubgroupCase { member, graph }
            });
            CosetCase {
                rep: rep.clone(),
                in_subgroup,
            }
        })
        .collect();
    Pipeline {
        reduced,
        ctx,
        cases,
    }
}

/// Decides `f ∈ HgK`.
pub fn member(h: &Subgroup, g: &Word, k: &Subgroup, f: &Word) -> bool {
    run_pipeline(h, g, k, f).member()
}

/// Builds a finite-index subgroup `M` with `Mf ∩ HgK = ∅`, packaged as a
/// self-contained certificate. Fails with [`Error::IsMember`] when
/// `f ∈ HgK`.
///
/// Per coset case inside `F₀`, the tested graph is completed to a cover of a
/// separating subgroup of `F₀`, lifted to the base alphabet, and conjugated
/// by the coset representative. Cases outside `F₀` are all handled by one
/// extra cover: the stabilizer of the vertex the shifted word maps onto the
/// basepoint, which is the conjugate `f′·F₀·f′⁻¹`. The final witness is the
/// fiber product of these covers in case order, and certificate
/// verification is a mandatory postcondition.
pub fn separability_witness(h: &Subgroup, g: &Word, k: &Subgroup, f: &Word) -> Result<Certificate> {
    let pipeline = run_pipeline(h, g, k, f);
    if pipeline.member() {
        return Err(Error::IsMember);
    }
    let mut covers: Vec<CoverGraph> = Vec::new();
    let mut any_outside = false;
    for case in &pipeline.cases {
        match &case.in_subgroup {
            Some(sub) => {
                let inner = complete(&sub.graph)
                    .expect("tested graphs are folded")
                    .into_cover();
                let lifted = pipeline.ctx.lift_cover(&inner);
                covers.push(lifted.with_basepoint_moved(&case.rep));
            }
            None => any_outside = true,
        }
    }
    if any_outside {
        covers.push(
            pipeline
                .ctx
                .cover()
                .with_basepoint_moved(&pipeline.reduced.f_shifted),
        );
    }
    let mut iter = covers.into_iter();
    let first = iter.next().expect("at least one coset case exists");
    let mut witness = first.graph().clone();
    for next in iter {
        witness = witness.pullback(next.graph())?;
    }
    let witness = CoverGraph::try_from(witness.canonicalize())?;
    let certificate = Certificate::new(
        h.alphabet(),
        h.generators().to_vec(),
        k.generators().to_vec(),
        g.clone(),
        f.clone(),
        witness.into_graph(),
    );
    assert_eq!(
        verify_certificate(&certificate),
        Ok(true),
        "separability witness must verify"
    );
    Ok(certificate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::brute_member;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rank2() -> Alphabet {
        Alphabet::new(2)
    }

    fn w(text: &str) -> Word {
        Word::parse(text, Alphabet::new(26)).unwrap()
    }

    fn subgroup(gens: &[&str]) -> Subgroup {
        Subgroup::new(rank2(), gens.iter().map(|t| w(t)).collect())
    }

    fn random_reduced_word(rng: &mut StdRng, rank: u32, max_len: usize) -> Word {
        let len = rng.gen_range(0..=max_len);
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        for _ in 0..len {
            loop {
                let idx = rng.gen_range(1..=rank);
                let l = if rng.gen_bool(0.5) {
                    Letter::positive(idx)
                } else {
                    Letter::negative(idx)
                };
                if letters.last().map(|p| p.inverse()) != Some(l) {
                    letters.push(l);
                    break;
                }
            }
        }
        Word::from_letters(letters)
    }

    fn random_subgroup(rng: &mut StdRng, max_gens: usize, max_len: usize) -> Subgroup {
        let gens = (0..rng.gen_range(0..=max_gens))
            .map(|_| random_reduced_word(rng, 2, max_len))
            .collect();
        Subgroup::new(rank2(), gens)
    }

    #[test]
    fn conjugation_reduce_examples() {
        let h = subgroup(&["a"]);
        let k = subgroup(&["a"]);
        let same = conjugation_reduce(&h, &Word::identity(), &k, &w("ab"));
        assert_eq!(same.k_conjugated.core(), k.core());
        assert_eq!(same.f_shifted, w("ab"));

        let reduced = conjugation_reduce(&h, &w("b"), &k, &w("aba"));
        assert_eq!(reduced.k_conjugated.generators(), &[w("baB")]);
        assert_eq!(reduced.f_shifted, w("abaB"));
    }

    #[test]
    fn conjugation_reduce_preserves_membership() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..30 {
            let h = random_subgroup(&mut rng, 3, 4);
            let k = random_subgroup(&mut rng, 3, 4);
            let g = random_reduced_word(&mut rng, 2, 3);
            let f = random_reduced_word(&mut rng, 2, 5);
            let reduced = conjugation_reduce(&h, &g, &k, &f);
            assert_eq!(
                member(&h, &g, &k, &f),
                member(
                    &reduced.h,
                    &Word::identity(),
                    &reduced.k_conjugated,
                    &reduced.f_shifted
                )
            );
        }
    }

    #[test]
    fn free_factor_embed_worked_example() {
        let ctx = free_factor_embed(&subgroup(&["aa", "b"]));
        assert_eq!(ctx.index(), 2);
        assert_eq!(ctx.basis(), &[w("aa"), w("b"), w("abA")]);
        assert_eq!(ctx.factor_letters().iter().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(ctx.complement_letters().iter().collect::<Vec<_>>(), vec![3]);
        assert_eq!(ctx.basis_alphabet().rank(), 3);
    }

    #[test]
    fn free_factor_embed_degenerate_cases() {
        let ctx = free_factor_embed(&subgroup(&["a"]));
        assert_eq!(ctx.index(), 1);
        assert_eq!(ctx.basis(), &[w("a"), w("b")]);
        assert_eq!(ctx.factor_letters().iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(ctx.complement_letters().iter().collect::<Vec<_>>(), vec![2]);

        let ctx = free_factor_embed(&Subgroup::trivial(rank2()));
        assert_eq!(ctx.index(), 1);
        assert_eq!(ctx.basis(), &[w("a"), w("b")]);
        assert!(ctx.factor_letters().is_empty());
        assert_eq!(ctx.complement_letters().len(), 2);
    }

    #[test]
    fn free_factor_invariants_on_randoms() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..30 {
            let k = random_subgroup(&mut rng, 4, 4);
            let ctx = free_factor_embed(&k);
            // rank identity V·(rank − 1) + 1 at rank 2
            let v = ctx.cover().vertex_count();
            assert_eq!(ctx.basis().len(), v + 1);
            // every basis word closes at the basepoint
            for b in ctx.basis() {
                assert!(ctx.contains(b));
            }
            // the factor letters expand to a generating set of k
            let factor_words: Vec<Word> = ctx
                .factor_letters()
                .iter()
                .map(|l| ctx.basis()[l as usize - 1].clone())
                .collect();
            let rebuilt = Subgroup::new(rank2(), factor_words);
            assert_eq!(
                rebuilt.core().canonicalize(),
                k.core().canonicalize(),
                "factor letters must regenerate the embedded subgroup"
            );
        }
    }

    #[test]
    fn rewrite_worked_example() {
        let ctx = free_factor_embed(&subgroup(&["aa", "b"]));
        let word = w("abAbaa");
        let rewritten = ctx.rewrite(&word).unwrap();
        let expected = Word::from_letters([
            Letter::positive(3),
            Letter::positive(2),
            Letter::positive(1),
        ]);
        assert_eq!(rewritten, expected);
        assert_eq!(ctx.expand(&rewritten), word);
    }

    #[test]
    fn rewrite_identities_and_errors() {
        let ctx = free_factor_embed(&subgroup(&["aa", "b"]));
        assert_eq!(ctx.rewrite(&Word::identity()).unwrap(), Word::identity());
        for (i, b) in ctx.basis().iter().enumerate() {
            assert_eq!(
                ctx.rewrite(b).unwrap(),
                Word::from_letters([Letter::positive(i as u32 + 1)])
            );
        }
        assert_eq!(ctx.rewrite(&w("a")).unwrap_err(), Error::NotInSubgroup);
    }

    #[test]
    fn rewrite_expand_round_trip_on_randoms() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..20 {
            let k = random_subgroup(&mut rng, 3, 4);
            let ctx = free_factor_embed(&k);
            let basis_rank = ctx.basis_alphabet().rank();
            for _ in 0..20 {
                let u = random_reduced_word(&mut rng, basis_rank, 6);
                assert_eq!(ctx.rewrite(&ctx.expand(&u)).unwrap(), u);
            }
        }
    }

    #[test]
    fn rewrite_is_a_homomorphism_on_closed_words() {
        let ctx = free_factor_embed(&subgroup(&["aa", "b"]));
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..100 {
            let u = random_reduced_word(&mut rng, ctx.basis_alphabet().rank(), 5);
            let v = random_reduced_word(&mut rng, ctx.basis_alphabet().rank(), 5);
            let (xu, xv) = (ctx.expand(&u), ctx.expand(&v));
            assert_eq!(
                ctx.rewrite(&xu.concat(&xv)).unwrap(),
                ctx.rewrite(&xu).unwrap().concat(&ctx.rewrite(&xv).unwrap())
            );
        }
    }

    #[test]
    fn coset_decomposition_examples() {
        let ctx = free_factor_embed(&subgroup(&["aa", "b"]));
        let d = coset_decomposition(&ctx, &subgroup(&["a"]));
        assert_eq!(d.reps(), &[Word::identity(), w("a")]);
        assert_eq!(d.orbit(), &[0, 1]);

        let d = coset_decomposition(&ctx, &subgroup(&["b"]));
        assert_eq!(d.reps(), &[Word::identity()]);

        // a subgroup inside F₀ needs no splitting
        let d = coset_decomposition(&ctx, &subgroup(&["aa", "abA"]));
        assert_eq!(d.reps(), &[Word::identity()]);
    }

    #[test]
    fn coset_decomposition_is_a_left_transversal() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..25 {
            let k = random_subgroup(&mut rng, 3, 4);
            let h = random_subgroup(&mut rng, 3, 4);
            let ctx = free_factor_embed(&k);
            let d = coset_decomposition(&ctx, &h);
            let cover = ctx.cover();
            // the representatives read from their orbit vertex back to the
            // basepoint, so their inverses reach pairwise distinct vertices
            let mut seen = std::collections::BTreeSet::new();
            for (rep, &vertex) in d.reps().iter().zip(d.orbit()) {
                assert_eq!(cover.read_total(cover.basepoint(), &rep.inverse()), vertex);
                assert!(seen.insert(vertex));
            }
            // random elements of H land in exactly one left coset
            for _ in 0..10 {
                let mut h_elem = Word::identity();
                for _ in 0..rng.gen_range(0..4) {
                    if h.generators().is_empty() {
                        break;
                    }
                    let g = &h.generators()[rng.gen_range(0..h.generators().len())];
                    h_elem = if rng.gen_bool(0.5) {
                        h_elem.concat(g)
                    } else {
                        h_elem.concat(&g.inverse())
                    };
                }
                let matches = d
                    .reps()
                    .iter()
                    .filter(|rep| ctx.contains(&rep.inverse().concat(&h_elem)))
                    .count();
                assert_eq!(matches, 1, "h = {h_elem} must lie in exactly one coset");
            }
        }
    }

    #[test]
    fn member_free_factor_case_examples() {
        // inside a rank-2 basis where letter 2 generates the factor
        let alphabet = rank2();
        let h = Subgroup::new(alphabet, vec![w("a")]);
        let factor: LetterSet = [2u32].into_iter().collect();

        let (inside, gamma) = member_free_factor_case(&h, &factor, &w("ba"));
        assert!(!inside);
        assert_eq!(gamma.vertex_count(), 3);

        let (inside, _) = member_free_factor_case(&h, &factor, &w("aaab"));
        assert!(inside);

        let (inside, gamma) = member_free_factor_case(&h, &factor, &w("aaa"));
        assert!(inside);
        assert_eq!(gamma.mark("p_end"), Some(gamma.basepoint()));
    }

    #[test]
    fn member_examples() {
        let h = subgroup(&["a"]);
        let k = subgroup(&["b"]);
        assert!(!member(&h, &Word::identity(), &k, &w("ba")));
        assert!(member(&h, &Word::identity(), &k, &w("aaaaaBBB")));

        let hk = subgroup(&["aa", "b"]);
        assert!(member(&hk, &w("a"), &hk, &w("a")));
    }

    #[test]
    fn member_matches_product_form() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..25 {
            let h = random_subgroup(&mut rng, 3, 4);
            let k = random_subgroup(&mut rng, 3, 4);
            let g = random_reduced_word(&mut rng, 2, 4);
            // f = h·g·k by construction
            let pick = |s: &Subgroup, rng: &mut StdRng| -> Word {
                let mut out = Word::identity();
                for _ in 0..rng.gen_range(0..3) {
                    if s.generators().is_empty() {
                        break;
                    }
                    let gen = &s.generators()[rng.gen_range(0..s.generators().len())];
                    out = if rng.gen_bool(0.5) {
                        out.concat(gen)
                    } else {
                        out.concat(&gen.inverse())
                    };
                }
                out
            };
            let f = pick(&h, &mut rng).concat(&g).concat(&pick(&k, &mut rng));
            assert!(
                member(&h, &g, &k, &f),
                "constructed product must be a member"
            );
        }
    }

    #[test]
    fn member_is_double_coset_invariant() {
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..20 {
            let h = random_subgroup(&mut rng, 2, 4);
            let k = random_subgroup(&mut rng, 2, 4);
            let g = random_reduced_word(&mut rng, 2, 3);
            let f = random_reduced_word(&mut rng, 2, 4);
            let base = member(&h, &g, &k, &f);
            for _ in 0..3 {
                let hh = if h.generators().is_empty() {
                    Word::identity()
                } else {
                    h.generators()[rng.gen_range(0..h.generators().len())].clone()
                };
                let kk = if k.generators().is_empty() {
                    Word::identity()
                } else {
                    k.generators()[rng.gen_range(0..k.generators().len())].clone()
                };
                let shifted = hh.concat(&f).concat(&kk);
                assert_eq!(member(&h, &g, &k, &shifted), base);
            }
        }
    }

    #[test]
    fn member_agrees_with_brute_oracle() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..40 {
            let h = random_subgroup(&mut rng, 3, 4);
            let k = random_subgroup(&mut rng, 3, 4);
            let g = random_reduced_word(&mut rng, 2, 3);
            let f = random_reduced_word(&mut rng, 2, 4);
            if brute_member(&h, &g, &k, &f, 8) {
                assert!(member(&h, &g, &k, &f), "brute decomposition disagrees");
            }
        }
    }

    /// Exact independent oracle: `f ∈ HgK ⟺ Hf ∩ gK ≠ ∅`. The reduced
    /// words of `Hf` are exactly the labels of reduced paths from the
    /// basepoint to the attached endpoint of the `f`-path in the folded
    /// core-plus-path graph of `H` (reduced paths between core and arc
    /// never leave them), and dually the words of `gK` read from the
    /// endpoint of the `g⁻¹`-path back to the basepoint in the graph of
    /// `K`. So the cosets meet exactly when a synchronized walk joins the
    /// two state pairs. Shares only reading tables with the pipeline.
    fn exact_double_coset_oracle(h: &Subgroup, g: &Word, k: &Subgroup, f: &Word) -> bool {
        let hf = h.core().with_path(h.core().basepoint(), f, "end").unwrap();
        let gk = k
            .core()
            .with_path(k.core().basepoint(), &g.inverse(), "start")
            .unwrap();
        let target = (hf.mark("end").unwrap(), gk.basepoint());
        let start = (hf.basepoint(), gk.mark("start").unwrap());
        let a = hf.try_folded_index().unwrap();
        let b = gk.try_folded_index().unwrap();
        let rank = h.alphabet().rank();
        let mut seen = std::collections::BTreeSet::from([start]);
        let mut queue = vec![start];
        while let Some((u, v)) = queue.pop() {
            if (u, v) == target {
                return true;
            }
            for l in 1..=rank {
                if let (Some(u2), Some(v2)) = (a.out(u, l), b.out(v, l)) {
                    if seen.insert((u2, v2)) {
                        queue.push((u2, v2));
                    }
                }
                if let (Some(u2), Some(v2)) = (a.inn(u, l), b.inn(v, l)) {
                    if seen.insert((u2, v2)) {
                        queue.push((u2, v2));
                    }
                }
            }
        }
        seen.contains(&target)
    }

    #[test]
    fn member_agrees_with_exact_coset_intersection_oracle() {
        let mut rng = StdRng::seed_from_u64(29);
        let mut members = 0;
        for trial in 0..400 {
            let rank = rng.gen_range(1..=3);
            let gens = |rng: &mut StdRng| -> Vec<Word> {
                (0..rng.gen_range(0..=4))
                    .map(|_| random_reduced_word(rng, rank, 5))
                    .collect()
            };
            let h = Subgroup::new(Alphabet::new(rank), gens(&mut rng));
            let k = Subgroup::new(Alphabet::new(rank), gens(&mut rng));
            let g = random_reduced_word(&mut rng, rank, 5);
            let f = random_reduced_word(&mut rng, rank, 5);
            let expected = exact_double_coset_oracle(&h, &g, &k, &f);
            assert_eq!(
                member(&h, &g, &k, &f),
                expected,
                "trial {trial}: H={:?} g={g} K={:?} f={f}",
                h.generators(),
                k.generators()
            );
            members += usize::from(expected);
        }
        // both answers must be exercised
        assert!(members > 50 && members < 350, "skewed sample: {members}");
    }

    #[test]
    fn witness_for_worked_example() {
        let h = subgroup(&["a"]);
        let k = subgroup(&["b"]);
        let certificate = separability_witness(&h, &Word::identity(), &k, &w("ba")).unwrap();
        let cover = certificate.cover();
        assert_eq!(cover.vertex_count(), 3);
        assert_eq!(
            cover.edges(),
            &[
                Edge::new(1, 0, 0),
                Edge::new(1, 1, 2),
                Edge::new(1, 2, 1),
                Edge::new(2, 0, 1),
                Edge::new(2, 1, 0),
                Edge::new(2, 2, 2),
            ]
        );
        assert_eq!(verify_certificate(&certificate), Ok(true));
    }

    #[test]
    fn witness_when_no_coset_case_lies_in_the_subgroup() {
        // H = ⟨b⟩ fixes the basepoint of the cover of ⟨aa⟩ and f = a reads
        // away from it, so every case falls outside F₀ and the witness is
        // the lone conjugated subgroup cover
        let h = subgroup(&["b"]);
        let k = subgroup(&["aa"]);
        let certificate = separability_witness(&h, &Word::identity(), &k, &w("a")).unwrap();
        assert_eq!(certificate.cover().vertex_count(), 2);
        assert_eq!(verify_certificate(&certificate), Ok(true));
    }

    #[test]
    fn witness_with_mixed_coset_cases() {
        // reps {1, a}: rep 1 leaves a·b outside F₀ while rep a pulls it in,
        // so the witness intersects a lifted cover with the outside handler
        let h = subgroup(&["a"]);
        let k = subgroup(&["aa"]);
        let f = w("ab");
        assert!(!member(&h, &Word::identity(), &k, &f));
        let certificate = separability_witness(&h, &Word::identity(), &k, &f).unwrap();
        assert_eq!(verify_certificate(&certificate), Ok(true));
    }

    #[test]
    fn witness_when_the_ambient_subgroup_has_index_two() {
        // K is its own conjugate here and F₀ has index 2; the final witness
        // still excludes f and survives verification
        let hk = subgroup(&["aa", "b"]);
        let certificate = separability_witness(&hk, &Word::identity(), &hk, &w("a")).unwrap();
        assert_eq!(verify_certificate(&certificate), Ok(true));
        assert_eq!(certificate.cover().vertex_count() % 2, 0);
    }

    #[test]
    fn witness_rejects_members() {
        let h = subgroup(&["a"]);
        let k = subgroup(&["b"]);
        assert!(matches!(
            separability_witness(&h, &Word::identity(), &k, &w("ab")),
            Err(Error::IsMember)
        ));
    }

    #[test]
    fn witness_verifies_on_random_instances() {
        let mut rng = StdRng::seed_from_u64(29);
        let mut separable = 0;
        let mut trials = 0;
        while separable < 60 && trials < 500 {
            trials += 1;
            let h = random_subgroup(&mut rng, 3, 4);
            let k = random_subgroup(&mut rng, 3, 4);
            let g = random_reduced_word(&mut rng, 2, 4);
            let f = random_reduced_word(&mut rng, 2, 4);
            if member(&h, &g, &k, &f) {
                continue;
            }
            separable += 1;
            let certificate = separability_witness(&h, &g, &k, &f).unwrap();
            assert_eq!(verify_certificate(&certificate), Ok(true));
        }
        assert_eq!(separable, 60, "not enough separable instances drawn");
    }

    #[test]
    fn lifted_cover_matches_basis_expansion_route() {
        // dual route: the synchronized product must equal the fold of the
        // wedge of expanded basis words of the inner cover
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..15 {
            let k = random_subgroup(&mut rng, 2, 3);
            let ctx = free_factor_embed(&k);
            let h = random_subgroup(&mut rng, 2, 3);
            let gens = ctx.intersection_in_basis(&h).unwrap();
            let h_in_basis = Subgroup::new(ctx.basis_alphabet(), gens);
            let f = random_reduced_word(&mut rng, ctx.basis_alphabet().rank(), 3);
            let (_, gamma) = member_free_factor_case(&h_in_basis, ctx.factor_letters(), &f);
            let inner = complete(&gamma).unwrap().into_cover();
            let lifted = ctx.lift_cover(&inner);

            let tree = inner
                .spanning_tree(inner.basepoint(), &Default::default())
                .unwrap();
            let expanded: Vec<Word> = inner.basis(&tree).iter().map(|b| ctx.expand(b)).collect();
            let folded = Subgroup::new(ctx.base_alphabet(), expanded);
            assert_eq!(folded.core(), &lifted.graph().canonicalize());
        }
    }
}
