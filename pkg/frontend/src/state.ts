/**
 * Client view state and its transitions.
 *
 * The state machine mirrors the service's own gates: the page and
 * post-test routes are unreachable until the pre-test is done, and the
 * questionnaire cannot be submitted until every item has an answer. All
 * transitions are pure so they can be tested without a DOM.
 */

import type { CoursePage, StyleProfile } from "./api.js";

export type Route =
    | { kind: "register" }
    | { kind: "questionnaire" }
    | { kind: "profile" }
    | { kind: "pretest" }
    | { kind: "page"; conceptId: string }
    | { kind: "posttest"; conceptId: string };

export interface ViewState {
    token: string | null;
    learnerId: string | null;
    courseId: string;
    route: Route;
    profile: StyleProfile | null;
    pretestDone: boolean;
    lastPage: CoursePage | null;
    questionnaireAnswers: Record<string, string>;
    questionnaireCursor: number;
    testAnswers: Record<string, number>;
    banner: string | null;
}

export function initialState(courseId: string): ViewState {
    return {
        token: null,
        learnerId: null,
        courseId,
        route: { kind: "register" },
        profile: null,
        pretestDone: false,
        lastPage: null,
        questionnaireAnswers: {},
        questionnaireCursor: 0,
        testAnswers: {},
        banner: null,
    };
}

export function answeredCount(state: ViewState): number {
    return Object.keys(state.questionnaireAnswers).length;
}

export function canSubmitQuestionnaire(state: ViewState, totalQuestions: number): boolean {
    return answeredCount(state) >= totalQuestions;
}

export function answerQuestion(
    state: ViewState,
    questionId: string,
    choice: "a" | "b",
): ViewState {
    return {
        ...state,
        questionnaireAnswers: { ...state.questionnaireAnswers, [questionId]: choice },
    };
}

export function answerTestItem(state: ViewState, itemId: string, option: number): ViewState {
    return { ...state, testAnswers: { ...state.testAnswers, [itemId]: option } };
}

/** Route change with the pre-test gate; blocked moves surface a banner. */
export function navigate(state: ViewState, route: Route): ViewState {
    const gated = route.kind === "page" || route.kind === "posttest";
    if (gated && !state.pretestDone) {
        return { ...state, banner: "Take the course pre-test before opening pages." };
    }
    return { ...state, route, banner: null, testAnswers: {} };
}

export function loggedIn(state: ViewState, learnerId: string, token: string): ViewState {
    return { ...state, learnerId, token };
}

export function profileReceived(state: ViewState, profile: StyleProfile): ViewState {
    return { ...state, profile, route: { kind: "profile" }, banner: null };
}

export function pretestGraded(state: ViewState): ViewState {
    return { ...state, pretestDone: true, testAnswers: {} };
}

export function pageReceived(state: ViewState, page: CoursePage): ViewState {
    return {
        ...state,
        lastPage: page,
        route: { kind: "page", conceptId: page.concept_id },
        banner: null,
    };
}

export function sessionExpired(state: ViewState): ViewState {
    // Stale token: back to the entry screen, everything session-bound dropped.
    return {
        ...initialState(state.courseId),
        banner: "Session expired; please log in again.",
    };
}
