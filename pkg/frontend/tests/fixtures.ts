import type {
    CourseDoc,
    CoursePage,
    InstrumentDoc,
    StyleProfile,
} from "../src/api.js";

const DIMENSIONS = ["Processing", "Reasoning", "Perception", "Progress"];

export function instrumentFixture(): InstrumentDoc {
    const questions = [];
    for (let i = 0; i < 44; i += 1) {
        const dimension = DIMENSIONS[i % 4] ?? "Processing";
        questions.push({
            question_id: `q${i + 1}`,
            dimension,
            prompt: `Prompt ${i + 1} (${dimension})`,
            answer_a: `choice a for ${i + 1}`,
            answer_b: `choice b for ${i + 1}`,
        });
    }
    return {
        instrument_id: "fixture-44",
        questions,
        dimension_poles: {
            Processing: ["Active", "Reflective"],
            Reasoning: ["Inductive", "Deductive"],
            Perception: ["Verbal", "Visual"],
            Progress: ["Sequential", "Global"],
        },
    };
}

export function profileFixture(source: "questionnaire" | "default"): StyleProfile {
    return {
        style_id: source === "default" ? 1 : 6,
        style_source: source,
        scores: [
            { dimension: "Processing", m: 11, n: 0, value: 11, pole: "Active", confidence: "Strong" },
            { dimension: "Reasoning", m: 3, n: 8, value: -5, pole: "Deductive", confidence: "Moderate" },
            { dimension: "Perception", m: 9, n: 2, value: 7, pole: "Verbal", confidence: "Moderate" },
            { dimension: "Progress", m: 5, n: 6, value: -1, pole: "Global", confidence: "Uncertain" },
        ],
    };
}

export function courseFixture(): CourseDoc {
    return {
        course_id: "fixture-course",
        objectives: [{ objective_id: "o1", text: "finish" }],
        concepts: [
            { concept_id: "alpha", title: "Alpha", objective_ids: [], prerequisite_ids: [] },
            { concept_id: "beta", title: "Beta", objective_ids: [], prerequisite_ids: ["alpha"] },
            { concept_id: "gamma", title: "Gamma", objective_ids: ["o1"], prerequisite_ids: ["beta"] },
        ],
        fragments: [
            { fragment_id: "alpha-ex", concept_id: "alpha", media: "text", role: "example",
              pole_tags: ["Verbal"], required_level: "Beginner", body_ref: "content/alpha/ex.md" },
            { fragment_id: "alpha-act", concept_id: "alpha", media: "text", role: "activity",
              pole_tags: ["Active"], required_level: "Beginner", body_ref: "content/alpha/act.md" },
            { fragment_id: "alpha-th", concept_id: "alpha", media: "text", role: "theory",
              pole_tags: ["Verbal"], required_level: "Beginner", body_ref: "content/alpha/th.md" },
        ],
        tests: [
            {
                test_id: "pre", concept_id: null,
                items: [
                    { item_id: "p1", prompt: "Pre 1", options: ["x", "y", "z"] },
                    { item_id: "p2", prompt: "Pre 2", options: ["x", "y", "z"] },
                ],
            },
        ],
    };
}

export function pageFixture(): CoursePage {
    return {
        course_id: "fixture-course",
        concept_id: "alpha",
        learner_id: "mara",
        fragments: ["alpha-ex", "alpha-act", "alpha-th"],
        links: [
            { target_concept_id: "beta", annotation: "recommended", visible: true },
            { target_concept_id: "gamma", annotation: "not_ready", visible: false },
        ],
        progress: { concept_score: 0.42, course_level: "Intermediate" },
        warnings: [],
        generated_at: "2024-01-01T00:00:00+00:00",
    };
}
