import { describe, expect, it } from "vitest";

import { renderPage, renderTest } from "../src/views.js";
import { courseFixture, pageFixture } from "./fixtures.js";

function fragmentOrder(html: string): string[] {
    return [...html.matchAll(/data-fragment-id="([^"]+)"/g)].map((m) => m[1] ?? "");
}

describe("course player", () => {
    it("renders fragments exactly in service order", () => {
        const page = pageFixture();
        const html = renderPage(page, courseFixture(), null);
        expect(fragmentOrder(html)).toEqual(page.fragments);
    });

    it("keeps a service-chosen reordering intact", () => {
        const page = { ...pageFixture(), fragments: ["alpha-th", "alpha-ex", "alpha-act"] };
        const html = renderPage(page, courseFixture(), null);
        expect(fragmentOrder(html)).toEqual(["alpha-th", "alpha-ex", "alpha-act"]);
    });

    it("omits hidden links from the DOM entirely", () => {
        const html = renderPage(pageFixture(), courseFixture(), null);
        expect(html).not.toContain("gamma");
        expect(html).toContain('data-target="beta"');
    });

    it("renders not_ready links disabled with their annotation", () => {
        const page = pageFixture();
        page.links = [
            { target_concept_id: "beta", annotation: "neutral", visible: true },
            { target_concept_id: "gamma", annotation: "not_ready", visible: true },
        ];
        const html = renderPage(page, courseFixture(), null);
        expect(html).toContain(
            '<button class="nav-link not-ready" disabled data-target="gamma"',
        );
        expect(html).toContain('data-annotation="not_ready"');
    });

    it("marks the recommended link", () => {
        const html = renderPage(pageFixture(), courseFixture(), null);
        expect(html).toContain('class="nav-link recommended"');
        expect(html).toContain("beta ★");
    });

    it("shows degradation warnings as a banner", () => {
        const page = { ...pageFixture(), warnings: ["style-filter-relaxed:Perception"] };
        const html = renderPage(page, courseFixture(), null);
        expect(html).toContain("Some filters were relaxed");
        expect(html).toContain("style-filter-relaxed:Perception");
    });

    it("shows no warning banner when the pipeline ran clean", () => {
        const html = renderPage(pageFixture(), courseFixture(), null);
        expect(html).not.toContain("filters were relaxed");
    });

    it("displays the progress panel from the payload", () => {
        const html = renderPage(pageFixture(), courseFixture(), null);
        expect(html).toContain('<span class="concept-score">0.42</span>');
        expect(html).toContain('<span class="course-level">Intermediate</span>');
    });

    it("matches the page snapshot", () => {
        expect(renderPage(pageFixture(), courseFixture(), null)).toMatchSnapshot();
    });
});

describe("knowledge tests", () => {
    it("disables submission until every item is answered", () => {
        const pretest = courseFixture().tests[0]!;
        const partial = renderTest(pretest, "Course pre-test", { p1: 0 }, null);
        expect(partial).toContain('<button id="submit-test" type="submit" disabled>');
        const full = renderTest(pretest, "Course pre-test", { p1: 0, p2: 2 }, null);
        expect(full).toContain('<button id="submit-test" type="submit">');
    });

    it("matches the test snapshot", () => {
        const pretest = courseFixture().tests[0]!;
        expect(renderTest(pretest, "Course pre-test", { p1: 1 }, null)).toMatchSnapshot();
    });
});
