mod common;

use std::time::Instant;

use wordassoc::corpus::build_vocabulary;
use wordassoc::embed::{char_ngrams, train, train_fasttext, Flavor, Hyperparams, TrainerKind};
use wordassoc::synthetic::TopicCorpus;

fn sanity_hyperparams() -> Hyperparams {
    Hyperparams {
        dimension: 32,
        epochs: 5,
        min_count: 1,
        buckets: 100_000,
        seed: 17,
        ..Default::default()
    }
}

#[test]
fn every_trainer_separates_topics() {
    let spec = TopicCorpus::default();
    let corpus = spec.build(42);
    let vocab = build_vocabulary(&corpus, 1).unwrap();
    for trainer in TrainerKind::ALL {
        let start = Instant::now();
        let model = train(trainer, &corpus, &vocab, &sanity_hyperparams(), 1).unwrap();
        let gap = common::topic_similarity_gap(&spec, &model.embeddings);
        println!("{trainer}: gap {gap:.3} in {:.2?}", start.elapsed());
        assert!(gap >= 0.1, "{trainer}: gap {gap}");
    }
}

#[test]
fn fasttext_rows_are_word_plus_ngram_sums() {
    let corpus = TopicCorpus::default().build(8);
    let vocab = build_vocabulary(&corpus, 1).unwrap();
    let hp = sanity_hyperparams();
    for flavor in [Flavor::Cbow, Flavor::Skipgram] {
        let ft = train_fasttext(&corpus, &vocab, flavor, &hp, 1).unwrap();
        for id in 0..vocab.len() {
            let mut want: Vec<f64> = ft.word_vector(id).iter().map(|&x| x as f64).collect();
            for b in char_ngrams(vocab.word(id), hp.ngram_min, hp.ngram_max, hp.buckets) {
                for (w, &g) in want.iter_mut().zip(ft.bucket_vector(b).unwrap()) {
                    *w += g as f64;
                }
            }
            for (got, w) in ft.model().embeddings.row(id).iter().zip(&want) {
                assert!((*got as f64 - w).abs() <= 1e-6, "{}: {got} vs {w}", vocab.word(id));
            }
        }
    }
}
