use bioqa_core::dataset::{load_question_set, QuestionSet, QuestionType};
use bioqa_core::prompts::{
    build_few_shot_extract, build_few_shot_plain, build_zero_shot_extract, build_zero_shot_plain,
    build_zero_shot_snippets, select_few_shot_samples, FewShotSample, Prompt,
};

use super::{fixture, read_fixture};

pub fn batch() -> QuestionSet {
    load_question_set(fixture("batch_fixture.json"), "batch").unwrap()
}

pub fn training() -> QuestionSet {
    load_question_set(fixture("training_fixture.json"), "training").unwrap()
}

pub fn golden(name: &str) -> String {
    read_fixture(&format!("prompts/{name}"))
}

/// Few-shot extract samples whose context is their first snippet.
fn factoid_samples_with_first_snippet(training: &QuestionSet) -> Vec<FewShotSample> {
    let samples = select_few_shot_samples(training, Some(QuestionType::Factoid), 10).unwrap();
    samples
        .into_iter()
        .map(|mut s| {
            let src = training.questions.iter().find(|q| q.body == s.question).unwrap();
            s.extract = Some(src.snippets[0].text.clone());
            s
        })
        .collect()
}

pub fn render_all() -> Vec<(&'static str, Prompt)> {
    let set = batch();
    let train = training();
    let dmd = set.get("dmd_prognosis").unwrap();
    let fnd = set.get("fnd_psychosomatic").unwrap();
    let dmd_extract = golden("dmd_extract.txt");
    let fnd_extract = "Challenges to the Diagnosis of Functional Neurological Disorder: Feigning, \
                       Intentionality, and Responsibility. Functional neurological disorder and somatic \
                       symptom disorder in Parkinson's disease.";
    vec![
        ("zero_plain_dmd.txt", build_zero_shot_plain(dmd)),
        (
            "few_plain_dmd.txt",
            build_few_shot_plain(dmd, &select_few_shot_samples(&train, None, 10).unwrap()).unwrap(),
        ),
        ("zero_snippets_dmd.txt", build_zero_shot_snippets(dmd)),
        (
            "zero_extract_dmd.txt",
            build_zero_shot_extract(dmd, &dmd_extract).unwrap(),
        ),
        (
            "zero_extract_fnd.txt",
            build_zero_shot_extract(fnd, fnd_extract).unwrap(),
        ),
        (
            "few_extract_dmd.txt",
            build_few_shot_extract(dmd, &dmd_extract, &factoid_samples_with_first_snippet(&train)).unwrap(),
        ),
    ]
}
