import type { Plugin } from "vite";
import { defineConfig } from "vitest/config";

// Source files import each other with .js specifiers (what the
// browser needs after tsc emit); map them back to .ts for vitest.
const tsJsExtension: Plugin = {
  name: "ts-js-extension",
  enforce: "pre",
  async resolveId(source, importer, options) {
    if (importer?.endsWith(".ts") && /^\.\.?\/.*\.js$/.test(source)) {
      return this.resolve(source.replace(/\.js$/, ".ts"), importer, {
        ...options,
        skipSelf: true,
      });
    }
    return null;
  },
};

export default defineConfig({
  plugins: [tsJsExtension],
  test: {
    environment: "jsdom",
    testTimeout: 20_000,
    hookTimeout: 90_000,
  },
});
