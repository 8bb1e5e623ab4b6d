/**
 * Questionnaire wizard logic: one item at a time over the instrument,
 * answers accumulated until all of them are in.
 */

import type { InstrumentDoc, Question } from "./api.js";

export interface WizardView {
    question: Question;
    index: number;
    total: number;
    answered: number;
    chosen: string | undefined;
    complete: boolean;
}

export function wizardView(
    instrument: InstrumentDoc,
    answers: Record<string, string>,
    cursor: number,
): WizardView {
    const total = instrument.questions.length;
    const index = Math.min(Math.max(cursor, 0), total - 1);
    const question = instrument.questions[index];
    if (!question) {
        throw new Error("instrument has no questions");
    }
    return {
        question,
        index,
        total,
        answered: countAnswered(instrument, answers),
        chosen: answers[question.question_id],
        complete: isComplete(instrument, answers),
    };
}

export function countAnswered(
    instrument: InstrumentDoc,
    answers: Record<string, string>,
): number {
    return instrument.questions.filter((q) => answers[q.question_id] !== undefined).length;
}

export function isComplete(
    instrument: InstrumentDoc,
    answers: Record<string, string>,
): boolean {
    return countAnswered(instrument, answers) === instrument.questions.length;
}

/** The index to jump to after answering: next unanswered item, if any. */
export function nextCursor(
    instrument: InstrumentDoc,
    answers: Record<string, string>,
    cursor: number,
): number {
    const total = instrument.questions.length;
    for (let step = 1; step <= total; step += 1) {
        const index = (cursor + step) % total;
        const question = instrument.questions[index];
        if (question && answers[question.question_id] === undefined) {
            return index;
        }
    }
    return Math.min(cursor + 1, total - 1);
}
