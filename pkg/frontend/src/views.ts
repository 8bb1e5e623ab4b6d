/**
 * Pure view functions: state in, HTML string out.
 *
 * The player contract is strict: fragments and links render exactly in
 * the order the service returned them, links with visible=false never
 * reach the DOM, and every displayed score or label is the service's own
 * value. No pedagogical logic lives here.
 */

import type {
    CoursePage,
    CourseDoc,
    DimensionScore,
    FragmentDoc,
    StyleProfile,
    TestDoc,
} from "./api.js";
import type { WizardView } from "./wizard.js";

export function escapeHtml(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;")
        .replace(/'/g, "&#39;");
}

export function renderBanner(message: string | null): string {
    if (!message) {
        return "";
    }
    return `<div class="banner" role="alert">${escapeHtml(message)}</div>`;
}

// ---------------------------------------------------------------------------
// Registration
// ---------------------------------------------------------------------------

export function renderRegister(banner: string | null): string {
    const field = (id: string, label: string, type = "text") =>
        `<label>${escapeHtml(label)}<input name="${id}" type="${type}" required></label>`;
    return [
        renderBanner(banner),
        `<section class="card"><h1>Create your account</h1>`,
        `<form id="register-form">`,
        field("login", "Login"),
        field("password", "Password", "password"),
        field("name", "Family name"),
        field("first_name", "First name"),
        field("age", "Age", "number"),
        field("email", "Email", "email"),
        `<label>Goal<select name="goal">` +
            `<option value="general">general</option>` +
            `<option value="in_depth">in depth</option></select></label>`,
        `<button type="submit">Register</button>`,
        `</form></section>`,
    ].join("");
}

// ---------------------------------------------------------------------------
// Questionnaire wizard
// ---------------------------------------------------------------------------

export function renderQuestionnaire(view: WizardView, banner: string | null): string {
    const q = view.question;
    const option = (value: "a" | "b", text: string) => {
        const checked = view.chosen === value ? " checked" : "";
        return (
            `<label class="option"><input type="radio" name="answer" ` +
            `value="${value}" data-question-id="${escapeHtml(q.question_id)}"${checked}>` +
            `${escapeHtml(text)}</label>`
        );
    };
    const submitDisabled = view.complete ? "" : " disabled";
    return [
        renderBanner(banner),
        `<section class="card questionnaire">`,
        `<h1>Learning style questionnaire</h1>`,
        `<p class="progress">Question ${view.index + 1} of ${view.total} · ` +
            `answered ${view.answered} of ${view.total}</p>`,
        `<fieldset data-question-id="${escapeHtml(q.question_id)}">`,
        `<legend>${escapeHtml(q.prompt)}</legend>`,
        option("a", q.answer_a),
        option("b", q.answer_b),
        `</fieldset>`,
        `<nav class="wizard-nav">`,
        `<button id="wizard-prev" type="button">Back</button>`,
        `<button id="wizard-next" type="button">Next</button>`,
        `</nav>`,
        `<button id="submit-questionnaire" type="button"${submitDisabled}>` +
            `Submit all ${view.total} answers</button>`,
        `<button id="skip-questionnaire" type="button">` +
            `Skip and use the default style</button>`,
        `</section>`,
    ].join("");
}

// ---------------------------------------------------------------------------
// Profile
// ---------------------------------------------------------------------------

export function renderProfile(profile: StyleProfile, banner: string | null): string {
    const row = (score: DimensionScore) =>
        `<tr data-dimension="${escapeHtml(score.dimension)}">` +
        `<td>${escapeHtml(score.dimension)}</td>` +
        `<td class="pole">${escapeHtml(score.pole)}</td>` +
        `<td class="value">${score.value}</td>` +
        `<td class="confidence">${escapeHtml(score.confidence)}</td></tr>`;
    const badge =
        profile.style_source === "default"
            ? `<span class="badge badge-default">default style</span>`
            : `<span class="badge badge-measured">questionnaire</span>`;
    return [
        renderBanner(banner),
        `<section class="card profile">`,
        `<h1>Your learning profile ${badge}</h1>`,
        `<p class="style-id">Style <strong>${profile.style_id}</strong></p>`,
        `<table><thead><tr><th>Dimension</th><th>Pole</th><th>Score</th>` +
            `<th>Confidence</th></tr></thead><tbody>`,
        ...profile.scores.map(row),
        `</tbody></table>`,
        `<button id="go-pretest" type="button">Start the course</button>`,
        `</section>`,
    ].join("");
}

// ---------------------------------------------------------------------------
// Knowledge tests
// ---------------------------------------------------------------------------

export function renderTest(
    test: TestDoc,
    heading: string,
    answers: Record<string, number>,
    banner: string | null,
): string {
    const item = (doc: TestDoc["items"][number]) => {
        const options = doc.options
            .map((text, index) => {
                const checked = answers[doc.item_id] === index ? " checked" : "";
                return (
                    `<label class="option"><input type="radio" ` +
                    `name="item-${escapeHtml(doc.item_id)}" value="${index}"` +
                    `${checked}>${escapeHtml(text)}</label>`
                );
            })
            .join("");
        return (
            `<fieldset data-item-id="${escapeHtml(doc.item_id)}">` +
            `<legend>${escapeHtml(doc.prompt)}</legend>${options}</fieldset>`
        );
    };
    const complete = test.items.every((i) => answers[i.item_id] !== undefined);
    const disabled = complete ? "" : " disabled";
    return [
        renderBanner(banner),
        `<section class="card test"><h1>${escapeHtml(heading)}</h1>`,
        `<form id="test-form" data-test-id="${escapeHtml(test.test_id)}">`,
        ...test.items.map(item),
        `<button id="submit-test" type="submit"${disabled}>Submit answers</button>`,
        `</form></section>`,
    ].join("");
}

// ---------------------------------------------------------------------------
// Course player
// ---------------------------------------------------------------------------

function fragmentBlock(doc: FragmentDoc): string {
    return (
        `<article class="fragment" data-fragment-id="${escapeHtml(doc.fragment_id)}" ` +
        `data-role="${escapeHtml(doc.role)}" data-media="${escapeHtml(doc.media)}">` +
        `<header><span class="role">${escapeHtml(doc.role)}</span>` +
        `<span class="media">${escapeHtml(doc.media)}</span></header>` +
        `<div class="body-ref">${escapeHtml(doc.body_ref)}</div>` +
        `</article>`
    );
}

export function renderPage(
    page: CoursePage,
    course: CourseDoc,
    banner: string | null,
): string {
    const byId = new Map(course.fragments.map((f) => [f.fragment_id, f]));
    const title =
        course.concepts.find((c) => c.concept_id === page.concept_id)?.title ??
        page.concept_id;

    const warnings =
        page.warnings.length > 0
            ? `<div class="banner warnings" role="alert">Some filters were relaxed: ` +
              page.warnings.map(escapeHtml).join(", ") +
              `</div>`
            : "";

    // Service order is authoritative: walk page.fragments as given.
    const fragments = page.fragments
        .map((fragmentId) => {
            const doc = byId.get(fragmentId);
            return doc
                ? fragmentBlock(doc)
                : `<article class="fragment" data-fragment-id="${escapeHtml(fragmentId)}">` +
                      `<div class="body-ref">${escapeHtml(fragmentId)}</div></article>`;
        })
        .join("");

    // Hidden links never reach the DOM; not_ready links render disabled.
    const links = page.links
        .filter((link) => link.visible)
        .map((link) => {
            const label = escapeHtml(link.target_concept_id);
            if (link.annotation === "not_ready") {
                return (
                    `<button class="nav-link not-ready" disabled ` +
                    `data-target="${label}" data-annotation="not_ready">` +
                    `${label} (not ready)</button>`
                );
            }
            const cls = link.annotation === "recommended" ? "recommended" : "neutral";
            return (
                `<button class="nav-link ${cls}" data-target="${label}" ` +
                `data-annotation="${link.annotation}">${label}` +
                (link.annotation === "recommended" ? " ★" : "") +
                `</button>`
            );
        })
        .join("");

    return [
        renderBanner(banner),
        warnings,
        `<section class="card page" data-concept-id="${escapeHtml(page.concept_id)}">`,
        `<h1>${escapeHtml(title)}</h1>`,
        `<p class="progress-panel">Concept score ` +
            `<span class="concept-score">${page.progress.concept_score}</span> · level ` +
            `<span class="course-level">${escapeHtml(page.progress.course_level)}</span></p>`,
        `<div class="fragments">${fragments}</div>`,
        `<nav class="links">${links}</nav>`,
        `<button id="go-posttest" type="button">Take the post-test</button>`,
        `</section>`,
    ].join("");
}
