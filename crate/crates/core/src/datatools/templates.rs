//! Bundled instruction templates for QA-pair construction.
//!
//! Each template is a complete task instruction; the record's source
//! field is appended after it when composing model input. Templates may
//! embed the direction's source slot (see
//! [`Direction::source_slot`](super::Direction::source_slot)) to inline
//! the source text instead; the bundled set deliberately stays
//! slot-free so instruction and source remain separable downstream.

use super::Direction;

const D2A: &[&str] = &[
    "Please generate the sequence of structured actions that corresponds to the following description of experimental procedures.",
    "Convert the experimental procedure described below into a structured action sequence.",
    "Read the following procedure description and write out the structured actions it implies.",
    "Translate this free-text description of an experiment into step-by-step structured actions.",
    "From the procedure text below, derive the ordered list of structured actions.",
    "Turn the following experimental narrative into its structured action representation.",
    "Extract the structured action sequence for the experimental description given below.",
    "Given a description of experimental procedures, produce the matching sequence of structured actions.",
];

const R2D: &[&str] = &[
    "Please write a description of the experimental procedures suitable for carrying out the following reaction.",
    "Given the reaction below, draft the free-text experimental procedure that realizes it.",
    "Propose an experimental description for performing this chemical reaction.",
    "Write the procedure text a chemist would follow to run the reaction shown below.",
    "Describe, in natural language, the experimental steps needed for the following reaction.",
    "Generate a plausible experimental write-up for the reaction given below.",
    "From the reaction equation below, compose a description of the corresponding procedure.",
    "Turn this reaction into a narrative description of the experiment that produces it.",
];

const A2D: &[&str] = &[
    "Please write the free-text experimental description that corresponds to the following structured action sequence.",
    "Expand the structured actions below into a natural-language procedure description.",
    "Given this sequence of structured actions, reconstruct the experimental narrative.",
    "Render the following action sequence as a prose description of the experiment.",
    "Describe in plain language the procedure encoded by the structured actions below.",
    "Compose the experimental write-up matching this ordered list of structured actions.",
    "Convert the structured action steps below back into a flowing procedure description.",
    "From the following structured actions, produce the corresponding description of experimental procedures.",
];

/// The bundled templates for one task direction.
pub fn default_templates(direction: Direction) -> &'static [&'static str] {
    match direction {
        Direction::D2A => D2A,
        Direction::R2D => R2D,
        Direction::A2D => A2D,
    }
}
