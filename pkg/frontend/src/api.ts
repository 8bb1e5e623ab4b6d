/**
 * Typed client over the adaptcourse HTTP API.
 *
 * The client never reinterprets payloads: whatever the service returns is
 * what the views render. Errors carry the service's {code, message} body.
 */

export interface Question {
    question_id: string;
    dimension: string;
    prompt: string;
    answer_a: string;
    answer_b: string;
}

export interface InstrumentDoc {
    instrument_id: string;
    questions: Question[];
    dimension_poles: Record<string, [string, string]>;
}

export interface DimensionScore {
    dimension: string;
    m: number;
    n: number;
    value: number;
    pole: string;
    confidence: string;
}

export interface StyleProfile {
    style_id: number;
    scores: DimensionScore[];
    style_source?: string;
}

export interface NavLink {
    target_concept_id: string;
    annotation: "recommended" | "neutral" | "not_ready";
    visible: boolean;
}

export interface CoursePage {
    course_id: string;
    concept_id: string;
    learner_id: string;
    fragments: string[];
    links: NavLink[];
    progress: { concept_score: number; course_level: string };
    warnings: string[];
    generated_at: string;
}

export interface FragmentDoc {
    fragment_id: string;
    concept_id: string;
    media: string;
    role: string;
    pole_tags: string[];
    required_level: string;
    body_ref: string;
}

export interface TestItemDoc {
    item_id: string;
    prompt: string;
    options: string[];
    concept_id?: string;
}

export interface TestDoc {
    test_id: string;
    concept_id: string | null;
    items: TestItemDoc[];
}

export interface CourseDoc {
    course_id: string;
    objectives: { objective_id: string; text: string }[];
    concepts: {
        concept_id: string;
        title: string;
        objective_ids: string[];
        prerequisite_ids: string[];
    }[];
    fragments: FragmentDoc[];
    tests: TestDoc[];
}

export interface LearnerRecord {
    learner_id: string;
    identity: { login: string; name: string; first_name: string; age: number; email: string };
    goal: string;
    enrolled_courses: string[];
    style: StyleProfile | null;
    style_source: string | null;
    overlay: Record<string, number>;
    status: Record<string, string>;
    traces: { timestamp: string; kind: string; payload: Record<string, unknown> }[];
}

export interface TestResult {
    test_id: string;
    learner_id: string;
    fraction: number;
    level: string | null;
    timestamp: string;
}

export interface RegistrationBody {
    login: string;
    password: string;
    name: string;
    first_name: string;
    age: number;
    email: string;
    goal: string;
    courses: string[];
}

export class ApiError extends Error {
    constructor(
        public readonly status: number,
        public readonly code: string,
        message: string,
    ) {
        super(message);
    }
}

export class ApiClient {
    private token: string | null = null;

    constructor(private readonly baseUrl: string) {}

    setToken(token: string | null): void {
        this.token = token;
    }

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const headers: Record<string, string> = { "Content-Type": "application/json" };
        if (this.token) {
            headers["Authorization"] = `Bearer ${this.token}`;
        }
        const response = await fetch(this.baseUrl + path, {
            method,
            headers,
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        const payload = await response.json().catch(() => ({}));
        if (!response.ok) {
            const code = typeof payload.code === "string" ? payload.code : "http_error";
            const message =
                typeof payload.message === "string" ? payload.message : response.statusText;
            throw new ApiError(response.status, code, message);
        }
        return payload as T;
    }

    register(body: RegistrationBody): Promise<LearnerRecord> {
        return this.request("POST", "/learners", body);
    }

    login(login: string, password: string): Promise<{ token: string; learner_id: string }> {
        return this.request("POST", "/login", { login, password });
    }

    instrument(): Promise<InstrumentDoc> {
        return this.request("GET", "/instrument");
    }

    learner(learnerId: string): Promise<LearnerRecord> {
        return this.request("GET", `/learners/${encodeURIComponent(learnerId)}`);
    }

    submitQuestionnaire(
        learnerId: string,
        answers: Record<string, string>,
    ): Promise<StyleProfile> {
        return this.request(
            "POST",
            `/learners/${encodeURIComponent(learnerId)}/questionnaire`,
            { answers },
        );
    }

    requestDefaultStyle(learnerId: string): Promise<StyleProfile> {
        return this.request(
            "POST",
            `/learners/${encodeURIComponent(learnerId)}/default-style`,
        );
    }

    course(courseId: string): Promise<CourseDoc> {
        return this.request("GET", `/courses/${encodeURIComponent(courseId)}`);
    }

    pretest(
        learnerId: string,
        courseId: string,
        testId: string,
        answers: Record<string, number>,
    ): Promise<TestResult> {
        return this.request(
            "POST",
            `/learners/${encodeURIComponent(learnerId)}/courses/${encodeURIComponent(courseId)}/pretest`,
            { test_id: testId, answers },
        );
    }

    posttest(
        learnerId: string,
        courseId: string,
        conceptId: string,
        testId: string,
        answers: Record<string, number>,
    ): Promise<TestResult> {
        return this.request(
            "POST",
            `/learners/${encodeURIComponent(learnerId)}/courses/${encodeURIComponent(courseId)}` +
                `/concepts/${encodeURIComponent(conceptId)}/posttest`,
            { test_id: testId, answers },
        );
    }

    page(
        learnerId: string,
        courseId: string,
        conceptId: string,
        fromConcept?: string,
    ): Promise<CoursePage> {
        const from = fromConcept
            ? `?from_concept=${encodeURIComponent(fromConcept)}`
            : "";
        return this.request(
            "GET",
            `/learners/${encodeURIComponent(learnerId)}/courses/${encodeURIComponent(courseId)}` +
                `/concepts/${encodeURIComponent(conceptId)}/page${from}`,
        );
    }
}
