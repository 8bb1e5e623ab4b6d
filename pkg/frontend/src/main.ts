/**
 * Browser bootstrap: owns the singleton state, talks to the service,
 * re-renders on every transition. All rendering goes through views.ts;
 * everything here is wiring.
 */

import { ApiClient, ApiError } from "./api.js";
import type { CourseDoc, InstrumentDoc, RegistrationBody } from "./api.js";
import * as state from "./state.js";
import { isComplete, nextCursor, wizardView } from "./wizard.js";
import {
    renderPage,
    renderProfile,
    renderQuestionnaire,
    renderRegister,
    renderTest,
} from "./views.js";

declare global {
    interface Window {
        ADAPTCOURSE_API?: string;
        ADAPTCOURSE_COURSE?: string;
    }
}

const apiBase = window.ADAPTCOURSE_API ?? "http://127.0.0.1:8000";
const courseId = window.ADAPTCOURSE_COURSE ?? "python-foundations";

const api = new ApiClient(apiBase);
let current = state.initialState(courseId);
let instrument: InstrumentDoc | null = null;
let course: CourseDoc | null = null;

const root = document.getElementById("app");
if (!root) {
    throw new Error("missing #app container");
}
const app: HTMLElement = root;

function update(next: state.ViewState): void {
    current = next;
    render();
}

function fail(error: unknown): void {
    if (error instanceof ApiError && error.status === 401 && current.token) {
        api.setToken(null);
        update(state.sessionExpired(current));
        return;
    }
    const message =
        error instanceof ApiError ? `${error.code}: ${error.message}` : String(error);
    update({ ...current, banner: message });
}

function render(): void {
    const route = current.route;
    switch (route.kind) {
        case "register":
            app.innerHTML = renderRegister(current.banner);
            bindRegister();
            return;
        case "questionnaire": {
            if (!instrument) {
                return;
            }
            const view = wizardView(
                instrument,
                current.questionnaireAnswers,
                current.questionnaireCursor,
            );
            app.innerHTML = renderQuestionnaire(view, current.banner);
            bindQuestionnaire();
            return;
        }
        case "profile":
            if (current.profile) {
                app.innerHTML = renderProfile(current.profile, current.banner);
                bindProfile();
            }
            return;
        case "pretest": {
            const pretest = course?.tests.find((t) => t.concept_id === null);
            if (pretest) {
                app.innerHTML = renderTest(
                    pretest, "Course pre-test", current.testAnswers, current.banner,
                );
                bindTest(pretest.test_id, null);
            }
            return;
        }
        case "posttest": {
            const posttest = course?.tests.find((t) => t.concept_id === route.conceptId);
            if (posttest) {
                app.innerHTML = renderTest(
                    posttest,
                    `Post-test: ${route.conceptId}`,
                    current.testAnswers,
                    current.banner,
                );
                bindTest(posttest.test_id, route.conceptId);
            }
            return;
        }
        case "page":
            if (current.lastPage && course) {
                app.innerHTML = renderPage(current.lastPage, course, current.banner);
                bindPage();
            }
            return;
    }
}

function bindRegister(): void {
    const form = document.getElementById("register-form") as HTMLFormElement | null;
    form?.addEventListener("submit", async (event) => {
        event.preventDefault();
        const data = new FormData(form);
        const body: RegistrationBody = {
            login: String(data.get("login") ?? ""),
            password: String(data.get("password") ?? ""),
            name: String(data.get("name") ?? ""),
            first_name: String(data.get("first_name") ?? ""),
            age: Number(data.get("age") ?? 0),
            email: String(data.get("email") ?? ""),
            goal: String(data.get("goal") ?? "general"),
            courses: [courseId],
        };
        try {
            await api.register(body);
            const session = await api.login(body.login, body.password);
            api.setToken(session.token);
            instrument = await api.instrument();
            course = await api.course(courseId);
            update(
                state.navigate(
                    state.loggedIn(current, session.learner_id, session.token),
                    { kind: "questionnaire" },
                ),
            );
        } catch (error) {
            fail(error);
        }
    });
}

function bindQuestionnaire(): void {
    app.querySelectorAll<HTMLInputElement>("input[type=radio][data-question-id]")
        .forEach((input) => {
            input.addEventListener("change", () => {
                if (!instrument) {
                    return;
                }
                const questionId = input.dataset.questionId ?? "";
                const next = state.answerQuestion(
                    current, questionId, input.value as "a" | "b",
                );
                const cursor = isComplete(instrument, next.questionnaireAnswers)
                    ? next.questionnaireCursor
                    : nextCursor(instrument, next.questionnaireAnswers,
                                 next.questionnaireCursor);
                update({ ...next, questionnaireCursor: cursor });
            });
        });
    document.getElementById("wizard-prev")?.addEventListener("click", () => {
        update({
            ...current,
            questionnaireCursor: Math.max(0, current.questionnaireCursor - 1),
        });
    });
    document.getElementById("wizard-next")?.addEventListener("click", () => {
        const total = instrument?.questions.length ?? 1;
        update({
            ...current,
            questionnaireCursor: Math.min(total - 1, current.questionnaireCursor + 1),
        });
    });
    document.getElementById("submit-questionnaire")?.addEventListener("click", async () => {
        if (!current.learnerId) {
            return;
        }
        try {
            const profile = await api.submitQuestionnaire(
                current.learnerId, current.questionnaireAnswers,
            );
            update(state.profileReceived(current, profile));
        } catch (error) {
            fail(error);
        }
    });
    document.getElementById("skip-questionnaire")?.addEventListener("click", async () => {
        if (!current.learnerId) {
            return;
        }
        try {
            const profile = await api.requestDefaultStyle(current.learnerId);
            update(state.profileReceived(current, profile));
        } catch (error) {
            fail(error);
        }
    });
}

function bindProfile(): void {
    document.getElementById("go-pretest")?.addEventListener("click", () => {
        update(state.navigate(current, { kind: "pretest" }));
    });
}

function bindTest(testId: string, conceptId: string | null): void {
    const form = document.getElementById("test-form") as HTMLFormElement | null;
    form?.querySelectorAll<HTMLInputElement>("input[type=radio]").forEach((input) => {
        input.addEventListener("change", () => {
            const fieldset = input.closest("fieldset");
            const itemId = fieldset?.dataset.itemId ?? "";
            update(state.answerTestItem(current, itemId, Number(input.value)));
        });
    });
    form?.addEventListener("submit", async (event) => {
        event.preventDefault();
        if (!current.learnerId) {
            return;
        }
        try {
            if (conceptId === null) {
                await api.pretest(
                    current.learnerId, courseId, testId, current.testAnswers,
                );
                const first = course?.concepts[0]?.concept_id;
                const afterPretest = state.pretestGraded(current);
                if (first) {
                    const page = await api.page(current.learnerId, courseId, first);
                    update(state.pageReceived(afterPretest, page));
                } else {
                    update(afterPretest);
                }
            } else {
                await api.posttest(
                    current.learnerId, courseId, conceptId, testId, current.testAnswers,
                );
                const page = await api.page(current.learnerId, courseId, conceptId);
                update(state.pageReceived({ ...current, testAnswers: {} }, page));
            }
        } catch (error) {
            fail(error);
        }
    });
}

function bindPage(): void {
    app.querySelectorAll<HTMLButtonElement>(".nav-link:not([disabled])").forEach((button) => {
        button.addEventListener("click", async () => {
            const target = button.dataset.target;
            if (!target || !current.learnerId || !current.lastPage) {
                return;
            }
            try {
                const page = await api.page(
                    current.learnerId, courseId, target, current.lastPage.concept_id,
                );
                update(state.pageReceived(current, page));
            } catch (error) {
                fail(error);
            }
        });
    });
    document.getElementById("go-posttest")?.addEventListener("click", () => {
        const conceptId = current.lastPage?.concept_id;
        if (conceptId) {
            update(state.navigate(current, { kind: "posttest", conceptId }));
        }
    });
}

render();
