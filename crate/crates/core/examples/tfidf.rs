//! Fits TF-IDF on a handful of tweets and prints each document's weights.

use tweet_emotion::preprocess::preprocess_classical;
use tweet_emotion::vectorizer::TfIdfModel;

fn main() -> tweet_emotion::Result<()> {
    let tweets = [
        "so happy and excited for the weekend :)",
        "happy happy joy joy",
        "this traffic makes me furious",
        "scared of the storm tonight 😱",
        "quiet morning, coffee and the news",
    ];
    let docs: Vec<_> = tweets.iter().map(|t| preprocess_classical(t)).collect();
    let (model, rows) = TfIdfModel::fit_transform(&docs)?;
    println!("vocabulary: {} terms", model.dim());
    let terms: Vec<&String> = model.vocabulary.keys().collect();
    for (tweet, row) in tweets.iter().zip(&rows) {
        println!("\n{tweet}");
        for (&col, &w) in row.indices().iter().zip(row.values()) {
            let term = terms[col as usize];
            println!("  {term:<12} tf-idf {w:.4}  idf {:.4}", model.idf_of(term).unwrap());
        }
    }
    let unseen = preprocess_classical("happy storm, never seen words");
    println!("\nunseen doc -> {} nonzero columns", model.transform(&unseen).nnz());
    Ok(())
}
