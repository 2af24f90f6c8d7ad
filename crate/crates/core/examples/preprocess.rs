//! Shows each stage of the classical text pipeline on a few tweets.
//!
//! ```text
//! cargo run --example preprocess -- "optional tweet text"
//! ```

use tweet_emotion::preprocess::{
    demojize, fold_ascii, preprocess_classical, preprocess_light, strip_artifacts, EmoticonLexicon,
};

fn main() {
    let mut texts: Vec<String> = std::env::args().skip(1).collect();
    if texts.is_empty() {
        texts = vec![
            "@jenny I'm SO happy today 😂😂 #blessed https://t.co/abc123".into(),
            "Can't believe the café closed... :( #sadday".into(),
            "RT @news: storm warning tonight, stay safe &amp; indoors".into(),
        ];
    }
    let lexicon = EmoticonLexicon::bundled();
    for text in &texts {
        let stripped = strip_artifacts(text);
        let words = demojize(&stripped, lexicon);
        println!("input     {text}");
        println!("stripped  {stripped}");
        println!("demojized {words}");
        println!("folded    {}", fold_ascii(&words));
        println!("tokens    {:?}", preprocess_classical(text).0);
        println!("light     {}", preprocess_light(text));
        println!();
    }
}
