use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qne_core::classify::{classify, classify_batch, ClassificationRule};
use qne_core::document::GameDocument;
use qne_core::equilibrium::{find_all_nash, is_nash, EquilibriumCriterion};
use qne_core::game::{Player, StrategySet};
use qne_core::random::{random_profile, random_setup, random_state, random_unitary_players};
use qne_core::{ObservableBasis, QuantumGame};

fn criteria() -> [EquilibriumCriterion; 3] {
    [
        EquilibriumCriterion::Literal,
        EquilibriumCriterion::lexicographic(),
        EquilibriumCriterion::scalarized(),
    ]
}

/// Tabulated game whose outcomes are drawn from a small pool, so that ties
/// and equilibria are common.
fn pooled_game(rng: &mut ChaCha8Rng) -> QuantumGame {
    let d = rng.random_range(2..=4);
    let basis = ObservableBasis::computational(d).unwrap();
    let n = rng.random_range(1..=3);
    let counts: Vec<usize> = (0..n).map(|_| rng.random_range(1..=3)).collect();
    let players = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let labels: Vec<String> = (0..c).map(|s| format!("s{s}")).collect();
            Player::new(
                StrategySet::keys(k + 1, &labels).unwrap(),
                random_profile(rng, k + 1, d),
            )
            .unwrap()
        })
        .collect();
    let pool: Vec<_> = (0..3).map(|_| random_state(rng, d)).collect();
    let plays: usize = counts.iter().product();
    let table = (0..plays)
        .map(|_| pool[rng.random_range(0..pool.len())].clone())
        .collect();
    QuantumGame::tabulated(basis, players, table).unwrap()
}

fn tensor_game(rng: &mut ChaCha8Rng) -> QuantumGame {
    let counts = [rng.random_range(1..=3), rng.random_range(1..=3)];
    let players = random_unitary_players(rng, &[2, 2], &counts);
    let entangle = rng.random_bool(0.5);
    let setup = random_setup(rng, &[2, 2], entangle);
    QuantumGame::tensor_unitary(ObservableBasis::computational(4).unwrap(), players, setup).unwrap()
}

#[test]
fn search_agrees_with_pointwise_checks() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut found = 0;
    for _ in 0..200 {
        let game = pooled_game(&mut rng);
        for criterion in criteria() {
            let search = find_all_nash(&game, &criterion).unwrap();
            assert_eq!(search.plays_tested, game.play_count());
            let expected: Vec<_> = game
                .plays()
                .filter(|p| is_nash(&game, p, &criterion).unwrap().0)
                .collect();
            let got: Vec<_> = search.equilibria.iter().map(|c| c.play.clone()).collect();
            assert_eq!(got, expected, "{criterion}");
            assert!(search.equilibria.iter().all(|c| c.holds()));
            found += got.len();
        }
    }
    assert!(found > 0);
}

#[test]
fn search_is_independent_of_thread_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let games: Vec<_> = (0..30).map(|_| tensor_game(&mut rng)).collect();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            games
                .iter()
                .flat_map(|g| criteria().map(|c| find_all_nash(g, &c).unwrap()))
                .collect::<Vec<_>>()
        })
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}

#[test]
fn random_games_survive_document_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for i in 0..40 {
        let game = if i % 2 == 0 {
            pooled_game(&mut rng)
        } else {
            tensor_game(&mut rng)
        };
        let doc = GameDocument::from_game(
            &game,
            &EquilibriumCriterion::scalarized(),
            &ClassificationRule::default(),
        );
        let parsed = GameDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(parsed.to_game().unwrap(), game);
        assert_eq!(parsed.criterion(), EquilibriumCriterion::scalarized());
    }
}

#[test]
fn batch_classification_matches_single_classification() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let basis = ObservableBasis::computational(4).unwrap();
    let rule = ClassificationRule::default();
    let ne = random_state(&mut rng, 4);
    let states: Vec<_> = (0..500).map(|_| random_state(&mut rng, 4)).collect();
    let report = classify_batch(&states, &ne, &basis, &rule).unwrap();
    let mut counts = [0usize; 4];
    for (q, item) in states.iter().zip(&report.items) {
        assert_eq!(&classify(q, &ne, &basis, &rule).unwrap(), item);
        counts[item.assigned.unwrap()] += 1;
    }
    assert_eq!(report.group_counts, counts);
    assert_eq!(report.unclassified, 0);
}
